from pathlib import Path

import numpy as np
import pytest

from rltqp.polyhedra.polyhedron import Polyhedron
from rltqp.relaxation.instance import LiftedPoint, QpInstance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def unit_box(n: int = 2) -> Polyhedron:
    """0 ≤ x ≤ 1 written as Gᵀx ≤ g with G = [I −I], g = (e, 0)."""
    return Polyhedron(n=n, G=np.hstack([np.eye(n), -np.eye(n)]), g=np.concatenate([np.ones(n), np.zeros(n)]))


def unit_simplex(n: int) -> Polyhedron:
    return Polyhedron(n=n, G=-np.eye(n), g=np.zeros(n), H=np.ones((n, 1)), h=np.ones(1))


def strip() -> Polyhedron:
    """−1 ≤ x₁ + x₂ ≤ 1: no vertices, two parallel minimal faces."""
    return Polyhedron(n=2, G=np.array([[1.0, -1.0], [1.0, -1.0]]), g=np.ones(2))


def orthant(n: int = 2) -> Polyhedron:
    return Polyhedron(n=n, G=-np.eye(n), g=np.zeros(n))


def prism() -> Polyhedron:
    """|x₁ + x₂| ≤ 1, |x₃| ≤ 1: a line along (1, −1, 0) and four minimal faces."""
    return Polyhedron.from_rows(
        [[1.0, 1.0, 0.0], [-1.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], [1.0, 1.0, 1.0, 1.0],
    )


def random_polytope(rng: np.random.Generator, n: int, cuts: int) -> Polyhedron:
    """The box [−1, 1]ⁿ plus random cuts that keep the origin strictly inside."""
    A = np.vstack([np.eye(n), -np.eye(n), rng.normal(size=(cuts, n))])
    b = np.concatenate([np.ones(2 * n), rng.uniform(0.5, 1.5, size=cuts)])
    return Polyhedron.from_rows(A, b)


def random_region(rng: np.random.Generator, n: int) -> Polyhedron:
    """Nonempty (the origin is feasible) and bounded or not depending on the draw."""
    rows = int(rng.integers(n, n + 4))
    A = rng.normal(size=(rows, n))
    return Polyhedron.from_rows(A, rng.uniform(0.0, 1.0, size=rows))


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    A = rng.uniform(-1.0, 1.0, size=(n, n))
    return 0.5 * (A + A.T)


def same_lifted(a: LiftedPoint, b: LiftedPoint, tol: float = 1e-7) -> bool:
    return bool(np.max(np.abs(a.x - b.x)) <= tol and np.max(np.abs(a.X - b.X)) <= tol)


def same_lifted_sets(first, second, tol: float = 1e-7) -> bool:
    return len(first) == len(second) and all(any(same_lifted(a, b, tol) for b in second) for a in first)


@pytest.fixture()
def box() -> Polyhedron:
    return unit_box(2)


@pytest.fixture()
def strip_region() -> Polyhedron:
    return strip()


@pytest.fixture()
def ex32() -> QpInstance:
    """Indefinite objective on the unit square whose relaxation bound −3/2 is below the optimum −1."""
    return QpInstance(Q=np.array([[-2.0, 2.0], [2.0, 2.0]]), c=np.array([0.0, -2.0]), poly=unit_box(2))


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
