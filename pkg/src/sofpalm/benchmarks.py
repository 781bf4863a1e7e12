"""Benchmark plant generators: a serial mass-spring chain and a network of
coupled unstable second-order systems placed randomly in a square."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .plant import Plant


@dataclass(frozen=True)
class DistributedLayout:
    """Planar positions of the distributed subsystems, in block order."""

    positions: np.ndarray
    side: float
    seed: int

    def __post_init__(self):
        pos = np.array(np.atleast_2d(self.positions), dtype=float)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def save(self, path) -> None:
        """Write one ``x y`` coordinate pair per line (17 significant
        digits), suitable for plotting."""
        with open(path, "w", encoding="ascii") as fh:
            for x, y in self.positions:
                fh.write(f"{x:.17g} {y:.17g}\n")


def make_mass_spring(N: int) -> Plant:
    """Serial chain of N unit masses coupled by unit springs.

    State x = [positions; velocities], so n = 2N. The stiffness block is
    the symmetric tridiagonal Toeplitz matrix with -2 on the diagonal and
    1 on the first sub- and superdiagonal; disturbances and controls both
    enter as forces (B1 = B2 = [0; I]). Weights are Q = I and R = 10 I.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    T = (-2.0 * np.eye(N) + np.eye(N, k=1) + np.eye(N, k=-1))
    A = np.block([[np.zeros((N, N)), np.eye(N)],
                  [T, np.zeros((N, N))]])
    B = np.vstack([np.zeros((N, N)), np.eye(N)])
    return Plant(A=A, B1=B, B2=B, Q=np.eye(2 * N), R=10.0 * np.eye(N),
                 p=2 * N)


def make_distributed(N: int, side: float = 10.0, seed: int = 0):
    """Network of N identical unstable subsystems in a ``side x side`` square.

    Each subsystem has local dynamics [[1, 1], [1, 2]] and input [0; 1];
    subsystems i != j couple through exp(-||p_i - p_j||) * I with positions
    p drawn uniformly from the square by a seeded PCG64 generator, so
    identical arguments reproduce the plant exactly. Weights are Q = I and
    R = 10 I. Returns ``(Plant, DistributedLayout)``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if side <= 0.0:
        raise ValueError("side must be positive")
    rng = np.random.default_rng(seed)
    positions = rng.uniform(0.0, side, size=(N, 2))
    diff = positions[:, None, :] - positions[None, :, :]
    alpha = np.exp(-np.sqrt(np.sum(diff * diff, axis=2)))
    np.fill_diagonal(alpha, 0.0)
    A = np.kron(np.eye(N), np.array([[1.0, 1.0], [1.0, 2.0]])) \
        + np.kron(alpha, np.eye(2))
    B = np.kron(np.eye(N), np.array([[0.0], [1.0]]))
    plant = Plant(A=A, B1=B, B2=B, Q=np.eye(2 * N), R=10.0 * np.eye(N),
                  p=2 * N)
    return plant, DistributedLayout(positions=positions, side=float(side),
                                    seed=int(seed))
