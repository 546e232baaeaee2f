"""Operational matrices on SGG grids: differentiation, cumulative/full integration,
and the Riemann-Liouville / Caputo fractional matrices."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from math import ceil, gamma

import numpy as np
from scipy.special import roots_jacobi

from .basis import BasisParams, NodeSet, ParameterDomainError, cardinal_matrix


class DegenerateGridError(ValueError):
    """Raised when a grid is too small for the requested operator."""


@dataclass(frozen=True)
class DiffMatrix:
    entries: np.ndarray
    basis: NodeSet


@dataclass(frozen=True)
class IntMatrix:
    entries: np.ndarray
    basis: NodeSet


@dataclass(frozen=True)
class IntRowVector:
    entries: np.ndarray
    basis: NodeSet


@dataclass(frozen=True)
class FracIntMatrix:
    entries: np.ndarray
    basis: NodeSet
    beta: float
    quad_params: tuple[int, float]


@dataclass(frozen=True)
class CaputoMatrix:
    entries: np.ndarray
    basis: NodeSet
    alpha: float
    quad_params: tuple[int, float]


def build_sgdm(ns: NodeSet) -> DiffMatrix:
    """First-order differentiation matrix from barycentric weights, with the
    negative-sum trick on the diagonal."""
    if ns.n < 1:
        raise DegenerateGridError("differentiation needs at least two nodes")
    x, w = ns.nodes, ns.bary_weights
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return DiffMatrix(D, ns)


def _aux_legendre(npts: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to [a, b]."""
    g, gw = np.polynomial.legendre.leggauss(npts)
    return a + (b - a) * (g + 1.0) / 2.0, gw * (b - a) / 2.0


def build_sgim(ns: NodeSet) -> IntMatrix:
    """Cumulative integration matrix: Q[i, j] = integral of the j-th cardinal
    function over [0, x_i], via an auxiliary Gauss-Legendre rule exact for the
    degree-n integrand."""
    npts = ceil((ns.n + 3) / 2)
    Q = np.empty((ns.n + 1, ns.n + 1))
    for i, xi in enumerate(ns.nodes):
        y, yw = _aux_legendre(npts, 0.0, xi)
        Q[i, :] = yw @ cardinal_matrix(ns, y)
    return IntMatrix(Q, ns)


def build_sgirv(ns: NodeSet) -> IntRowVector:
    """Full-interval integration row vector: P[j] = integral of the j-th cardinal
    function over [0, 1]."""
    npts = ceil((ns.n + 3) / 2)
    y, yw = _aux_legendre(npts, 0.0, 1.0)
    return IntRowVector((yw @ cardinal_matrix(ns, y)).reshape(1, -1), ns)


def build_rl_fsgim(ns_t: NodeSet, beta: float, n2: int, lam2: float) -> FracIntMatrix:
    """Riemann-Liouville fractional integration matrix of order beta in (0, 1].

    Row j applies (I^beta g)(t_j) to nodal data via the scaling tau = t_j * s,
        (t_j^beta / Gamma(beta)) * int_0^1 (1-s)^(beta-1) g(t_j s) ds,
    integrated with an (n2+1)-point Gauss-Jacobi rule with weight (1-s)^(beta-1)
    that absorbs the endpoint singularity. The remaining integrand is the
    degree-m cardinal polynomial, so the rule is exact whenever 2*n2 + 1 >= m.
    lam2 is validated and recorded but does not alter the realized rule: any
    s^(lam2-1/2) reweighting would need a non-polynomial compensation factor
    and lose that exactness.
    """
    if not 0.0 < beta <= 1.0:
        raise ParameterDomainError(f"fractional order beta={beta} outside (0, 1]")
    BasisParams(lam2, max(n2, 0))  # validate the quadrature index window
    if n2 < 0:
        raise ParameterDomainError(f"quadrature degree n2={n2} must be nonnegative")
    s, sw = roots_jacobi(n2 + 1, beta - 1.0, 0.0)
    s = (s + 1.0) / 2.0
    sw = sw * 2.0 ** (-beta)
    m = ns_t.n
    B = np.empty((m + 1, m + 1))
    for j, tj in enumerate(ns_t.nodes):
        L = cardinal_matrix(ns_t, tj * s)
        B[j, :] = (tj**beta / gamma(beta)) * (sw @ L)
    return FracIntMatrix(B, ns_t, beta, (n2, lam2))


def build_c_fsgim(ns_t: NodeSet, alpha: float, n1: int, lam1: float) -> CaputoMatrix:
    """Caputo fractional differentiation matrix of order alpha in (0, 1], realized
    as the order-(1-alpha) RL integration of the first derivative; alpha = 1
    returns the plain differentiation matrix."""
    if not 0.0 < alpha <= 1.0:
        raise ParameterDomainError(f"fractional order alpha={alpha} outside (0, 1]")
    D = build_sgdm(ns_t).entries
    if alpha == 1.0:
        return CaputoMatrix(D, ns_t, alpha, (n1, lam1))
    B = build_rl_fsgim(ns_t, 1.0 - alpha, n1, lam1).entries
    return CaputoMatrix(B @ D, ns_t, alpha, (n1, lam1))


@dataclass(frozen=True)
class OperatorBundle:
    """All precomputed matrices for one (n, m, alpha, lambda...) configuration."""

    ns_x: NodeSet
    ns_t: NodeSet
    alpha: float
    D_x: np.ndarray
    Q_x: np.ndarray
    P_x: np.ndarray
    D_t: np.ndarray
    Q_t: np.ndarray
    rl_frac: np.ndarray  # order 1 - alpha; identity at alpha = 1
    caputo: np.ndarray  # order alpha


def build_operator_bundle(
    ns_x: NodeSet,
    ns_t: NodeSet,
    alpha: float,
    n1: int = 14,
    lam1: float = 0.5,
    n2: int = 14,
    lam2: float = 0.5,
) -> OperatorBundle:
    if not 0.0 < alpha <= 1.0:
        raise ParameterDomainError(f"fractional order alpha={alpha} outside (0, 1]")
    if alpha == 1.0:
        rl = np.eye(ns_t.n + 1)
    else:
        rl = build_rl_fsgim(ns_t, 1.0 - alpha, n2, lam2).entries
    return OperatorBundle(
        ns_x=ns_x,
        ns_t=ns_t,
        alpha=alpha,
        D_x=build_sgdm(ns_x).entries,
        Q_x=build_sgim(ns_x).entries,
        P_x=build_sgirv(ns_x).entries,
        D_t=build_sgdm(ns_t).entries,
        Q_t=build_sgim(ns_t).entries,
        rl_frac=rl,
        caputo=build_c_fsgim(ns_t, alpha, n1, lam1).entries,
    )


_BIN_MAGIC = b"FBMX"


def save_matrix(M: np.ndarray, path) -> None:
    """Dump a matrix for debugging. '.json' suffix writes {rows, cols, data};
    anything else writes the binary layout documented in the README: 4-byte
    magic 'FBMX', two little-endian uint64 (rows, cols), then row-major
    little-endian float64 entries."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    path = str(path)
    if path.endswith(".json"):
        with open(path, "w") as fh:
            json.dump({"rows": M.shape[0], "cols": M.shape[1], "data": M.tolist()}, fh)
    else:
        with open(path, "wb") as fh:
            fh.write(_BIN_MAGIC)
            fh.write(struct.pack("<QQ", M.shape[0], M.shape[1]))
            fh.write(np.ascontiguousarray(M, dtype="<f8").tobytes())


def load_matrix(path) -> np.ndarray:
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            doc = json.load(fh)
        return np.asarray(doc["data"], dtype=float).reshape(doc["rows"], doc["cols"])
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BIN_MAGIC:
            raise ValueError(f"{path} is not a matrix dump (bad magic {magic!r})")
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
    return data.reshape(rows, cols).astype(float)
