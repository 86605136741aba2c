"""Laplacian, harmonic extension, and the Steklov operator of a graph.

The Steklov operator maps boundary values to the outward normal derivative of
their harmonic extension.  Its matrix (scaled by the boundary masses) is the
Schur complement of the weighted Laplacian onto the boundary block, and the
eigenvalues come from the generalized symmetric problem ``S v = sigma M_B v``
solved through the diagonal mass reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .graph import (
    EmptyBoundaryError,
    GraphError,
    WeightedBoundaryGraph,
    boundary_vector,
    require_connected,
    vertex_vector,
)

# Scale-free tolerances for the structural invariants of the Steklov matrix.
SYMMETRY_TOL = 1e-12
KERNEL_TOL = 1e-10
PSD_TOL = 1e-10
SIGMA1_TOL = 1e-10


class NumericsError(RuntimeError):
    """A computed matrix violated an invariant beyond numerical tolerance."""


def laplacian(g: WeightedBoundaryGraph) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized weighted Laplacian matrix L and the measure vector m.

    ``L[x, y] = -w_xy`` on edges and the diagonal holds the weighted degree,
    so row sums vanish.  The Laplacian operator itself is ``-diag(m)^-1 L``
    (non-positive spectrum convention: it averages neighbors minus center).
    """
    n = g.n
    L = np.zeros((n, n))
    for u, v, w in g.edges:
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L, np.asarray(g.measures, dtype=float).copy()


@dataclass(frozen=True)
class EdgeDifferential:
    """Skew-symmetric edge function, stored along canonical orientations.

    ``values[k]`` is the value on edge ``g.edges[k] = (u, v)`` oriented from
    u to v; the opposite orientation is its negative and non-edges are 0.
    """

    graph: WeightedBoundaryGraph
    values: np.ndarray

    def at(self, x: int, y: int) -> float:
        """Value on the ordered pair (x, y); 0.0 when x and y are not adjacent."""
        rank = self.graph.edge_rank.get((min(x, y), max(x, y)))
        if rank is None:
            return 0.0
        return float(self.values[rank]) if x < y else -float(self.values[rank])


def differential(g: WeightedBoundaryGraph, u) -> EdgeDifferential:
    """Differential du with du(x, y) = u(y) - u(x) on edges."""
    uv = vertex_vector(g, u)
    heads = np.fromiter((e[1] for e in g.edges), dtype=np.intp, count=len(g.edges))
    tails = np.fromiter((e[0] for e in g.edges), dtype=np.intp, count=len(g.edges))
    values = uv[heads] - uv[tails]
    values.setflags(write=False)
    return EdgeDifferential(graph=g, values=values)


def dirichlet_energy(
    g: WeightedBoundaryGraph, a: EdgeDifferential, b: EdgeDifferential
) -> float:
    """Edge inner product  sum over edges of a(x,y) b(x,y) w_xy."""
    if len(a.values) != len(g.edges) or len(b.values) != len(g.edges):
        raise GraphError("edge differential does not match the graph")
    weights = np.fromiter((e[2] for e in g.edges), dtype=float, count=len(g.edges))
    return float(np.dot(a.values * weights, b.values))


def normal_derivative(g: WeightedBoundaryGraph, u) -> np.ndarray:
    """Outward normal derivative at each boundary vertex (boundary-id order).

    At x in B this is ``(1/m_x) sum_y (u(x) - u(y)) w_xy``, i.e. minus the
    Laplacian evaluated at x.
    """
    if len(g.boundary) == 0:
        raise EmptyBoundaryError("graph has an empty boundary")
    uv = vertex_vector(g, u)
    L, m = laplacian(g)
    flux = L @ uv
    bidx = np.asarray(g.boundary, dtype=np.intp)
    return flux[bidx] / m[bidx]


def harmonic_extension(g: WeightedBoundaryGraph, f) -> np.ndarray:
    """Vertex function equal to f on B and harmonic at every interior vertex.

    Solves the interior block system ``L_OO u_O = -L_OB f`` by Cholesky
    factorization; the block is positive definite whenever the graph is
    connected and the boundary nonempty.
    """
    require_connected(g)
    fvec = boundary_vector(g, f)
    u = np.zeros(g.n)
    bidx = np.asarray(g.boundary, dtype=np.intp)
    u[bidx] = fvec
    iidx = np.asarray(g.interior, dtype=np.intp)
    if len(iidx) == 0:
        return u
    L, _ = laplacian(g)
    L_oo = L[np.ix_(iidx, iidx)]
    L_ob = L[np.ix_(iidx, bidx)]
    u[iidx] = cho_solve(cho_factor(L_oo), -L_ob @ fvec)
    return u


@dataclass(frozen=True)
class SteklovSystem:
    """Boundary-reduced system: Schur matrix S and boundary mass diagonal.

    S represents ``f -> M_B (Lambda f)`` in boundary order; the Steklov
    operator itself is ``diag(boundary_mass)^-1 S``.  The matrix stored here
    is exactly symmetrized; construction verifies that the raw asymmetry and
    the residual of S applied to constants stay within tolerance.
    """

    schur: np.ndarray
    boundary_mass: np.ndarray
    boundary_order: tuple[int, ...]

    @property
    def steklov_matrix(self) -> np.ndarray:
        """Matrix of the Steklov operator (not symmetric in general)."""
        return self.schur / self.boundary_mass[:, None]

    def to_json_dict(self, g: WeightedBoundaryGraph) -> dict:
        return {
            "boundary": [g.labels[b] for b in self.boundary_order],
            "boundary_mass": [float(m) for m in self.boundary_mass],
            "schur_row_major": [float(x) for x in self.schur.ravel()],
        }


def _validated_system(
    raw: np.ndarray, mass: np.ndarray, order: tuple[int, ...]
) -> SteklovSystem:
    scale = max(1.0, float(np.abs(raw).max(initial=0.0)))
    asym = float(np.abs(raw - raw.T).max(initial=0.0))
    if asym > SYMMETRY_TOL * scale:
        raise NumericsError(f"Steklov matrix asymmetry {asym:.3e} exceeds tolerance")
    sym = 0.5 * (raw + raw.T)
    kernel_residual = float(np.abs(sym @ np.ones(len(order))).max(initial=0.0))
    if kernel_residual > KERNEL_TOL * scale:
        raise NumericsError(
            f"Steklov matrix does not annihilate constants "
            f"(residual {kernel_residual:.3e})"
        )
    sym.setflags(write=False)
    mass = np.asarray(mass, dtype=float).copy()
    mass.setflags(write=False)
    return SteklovSystem(schur=sym, boundary_mass=mass, boundary_order=order)


def steklov_system(g: WeightedBoundaryGraph) -> SteklovSystem:
    """Schur complement of the Laplacian onto the boundary block.

    ``S = L_BB - L_BO L_OO^-1 L_OB``; with an empty interior S is just
    ``L_BB``.  Requires a connected graph and a nonempty boundary.
    """
    require_connected(g)
    if len(g.boundary) == 0:
        raise EmptyBoundaryError("graph has an empty boundary")
    L, m = laplacian(g)
    bidx = np.asarray(g.boundary, dtype=np.intp)
    iidx = np.asarray(g.interior, dtype=np.intp)
    L_bb = L[np.ix_(bidx, bidx)]
    if len(iidx) == 0:
        raw = L_bb
    else:
        L_ob = L[np.ix_(iidx, bidx)]
        L_oo = L[np.ix_(iidx, iidx)]
        raw = L_bb - L_ob.T @ cho_solve(cho_factor(L_oo), L_ob)
    return _validated_system(raw, m[bidx], tuple(g.boundary))


@dataclass(frozen=True)
class Spectrum:
    """Ascending Steklov eigenvalues, optionally with m-orthonormal vectors.

    ``eigenvectors[:, i]`` (when requested) is the eigenfunction of
    ``eigenvalues[i]`` in original boundary coordinates.  Indices beyond
    ``|B|`` follow the +infinity convention through :meth:`sigma`.
    """

    eigenvalues: np.ndarray
    boundary_order: tuple[int, ...]
    eigenvectors: np.ndarray | None = None

    def sigma(self, i: int) -> float:
        """i-th eigenvalue, 1-based; +inf past the end of the spectrum."""
        if i < 1:
            raise IndexError("eigenvalue indices are 1-based")
        if i > len(self.eigenvalues):
            return float("inf")
        return float(self.eigenvalues[i - 1])

    def to_json_dict(self, g: WeightedBoundaryGraph) -> dict:
        return {
            "boundary": [g.labels[b] for b in self.boundary_order],
            "eigenvalues": [float(s) for s in self.eigenvalues],
        }


def steklov_spectrum(
    g: WeightedBoundaryGraph, with_vectors: bool = False
) -> Spectrum:
    """Solve ``S v = sigma M_B v`` via the diagonal mass reduction.

    The symmetric problem is ``M^-1/2 S M^-1/2``; eigenvectors are mapped
    back to original coordinates, where they are orthonormal in the
    m-weighted boundary inner product.
    """
    system = steklov_system(g)
    inv_sqrt = 1.0 / np.sqrt(system.boundary_mass)
    reduced = system.schur * inv_sqrt[:, None] * inv_sqrt[None, :]
    reduced = 0.5 * (reduced + reduced.T)
    if with_vectors:
        vals, vecs = np.linalg.eigh(reduced)
        vectors = vecs * inv_sqrt[:, None]
    else:
        vals = np.linalg.eigvalsh(reduced)
        vectors = None
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    if vals[0] < -PSD_TOL * scale:
        raise NumericsError(f"Steklov matrix not PSD: lowest eigenvalue {vals[0]:.3e}")
    vals.setflags(write=False)
    if vectors is not None:
        vectors.setflags(write=False)
    return Spectrum(
        eigenvalues=vals,
        boundary_order=system.boundary_order,
        eigenvectors=vectors,
    )


def rayleigh_quotient(g: WeightedBoundaryGraph, f) -> float:
    """Dirichlet energy of the harmonic extension over the boundary norm.

    ``<du_f, du_f> / <f, f>_B``; minimizing over boundary functions that are
    m-orthogonal to constants yields sigma_2.
    """
    require_connected(g)
    fvec = boundary_vector(g, f)
    if not np.any(fvec):
        raise GraphError("zero boundary function")
    u = harmonic_extension(g, fvec)
    du = differential(g, u)
    energy = dirichlet_energy(g, du, du)
    bidx = np.asarray(g.boundary, dtype=np.intp)
    denom = float(np.dot(fvec * fvec, g.measures[bidx]))
    return energy / denom
