"""Design comparison metrics: entropy, variance, design effect, spectra.

A design is judged here along three axes: how much randomization it keeps
(entropy, KL divergence), how precise the expansion estimator of a total is
for a given study variable (variance, design effect), and how evenly it
treats the space of study variables (dispersion of the eigenvalues of the
design covariance matrix).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConstantVariable, NonMultiple, SupportViolation
from .inclusion import PiklMatrix, SamplingDesign
from .strata import ProbabilityVector

# The design variance-covariance matrix Delta, with entries
# pikl - pik*pil, is passed around as a plain symmetric ndarray.
DesignMatrix = np.ndarray


def entropy(d: SamplingDesign) -> float:
    """Shannon entropy of a design, in nats (0 log 0 = 0)."""
    return -math.fsum(p * math.log(p) for _, p in d.support if p > 0.0)


def entropy_closed_form(kind: str, N: int, n: int) -> float:
    """Entropy of the three reference equal-probability designs.

    srs: log C(N, n); sys: log(N/n); ops: n log(N/n).  The last two need
    N to be a multiple of n.
    """
    if kind == "srs":
        return math.fsum(math.log((N - k) / (n - k)) for k in range(n))
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    if kind == "sys":
        return math.log(N / n)
    if kind == "ops":
        return n * math.log(N / n)
    raise ValueError(f"unknown design kind {kind!r}")


def kl_divergence(q: SamplingDesign, r: SamplingDesign) -> float:
    """Kullback-Leibler divergence D(q || r) between two designs.

    Defined only when r covers the support of q; otherwise raises
    SupportViolation.
    """
    dr = r.as_dict()
    terms = []
    for units, p in q.support:
        p_r = dr.get(units, 0.0)
        if p_r <= 0.0:
            raise SupportViolation(
                f"sample {units} has probability {p} under q but 0 under r"
            )
        terms.append(p * math.log(p / p_r))
    return math.fsum(terms)


def delta_matrix(pm: PiklMatrix) -> DesignMatrix:
    """Design variance-covariance matrix: joint probabilities minus the
    independent products.  Rows sum to zero for fixed-size designs."""
    pik = pm.first_order()
    return pm.values - np.outer(pik, pik)


def ht_variance(dm: DesignMatrix, pv: ProbabilityVector, y) -> float:
    """Variance of the expansion (inverse-probability) estimator of the
    total of y under the design described by ``dm``."""
    y = np.asarray(y, dtype=float)
    if y.shape != (pv.N,):
        raise ValueError(f"study variable must have length {pv.N}")
    u = y / np.asarray(pv.pi)
    return float(u @ dm @ u)


def variance_closed_form(kind: str, y, N: int, n: int) -> float:
    """Closed-form variance of the total estimator under equal
    probabilities n/N.

    srs works for any 1 <= n <= N.  ops (one independent draw per block of
    p = N/n consecutive units) and sys (one random offset shared by all
    blocks) require N = n*p.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (N,):
        raise ValueError(f"study variable must have length {N}")
    f = n / N
    lead = N * N * (1.0 - f) / n
    if kind == "srs":
        return lead * float(np.var(y, ddof=1))
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    p = N // n
    if p == 1:
        return 0.0
    if kind == "ops":
        strata = y.reshape(n, p)
        return lead * float(np.mean(np.var(strata, axis=1, ddof=1)))
    if kind == "sys":
        offsets = y.reshape(n, p)  # column j collects offset j across blocks
        m = offsets.mean(axis=0)
        s_between = n * n / (p - 1) * float(np.sum((m - y.mean()) ** 2))
        return lead * s_between / n
    raise ValueError(f"unknown design kind {kind!r}")


def srs_pikl(N: int, n: int) -> PiklMatrix:
    """Joint inclusion probabilities of simple random sampling."""
    pik = n / N
    joint = n * (n - 1) / (N * (N - 1))
    values = np.full((N, N), joint)
    np.fill_diagonal(values, pik)
    return PiklMatrix(values)


def markov_pikl(N: int, n: int, rho: float) -> PiklMatrix:
    """Joint inclusion probabilities of the compromise chain design.

    Offsets within successive blocks of size p = N/n evolve by resampling
    with probability rho; the m-step transition mixes the uniform row with
    weight 1-(1-rho)^m.  rho = 1 reproduces the pivotal design, rho = 0
    the systematic one.
    """
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    p = N // n
    pik = 1.0 / p
    values = np.zeros((N, N))
    np.fill_diagonal(values, pik)
    for k in range(1, N + 1):
        i, r = divmod(k - 1, p)
        for l in range(k + 1, N + 1):
            j, s = divmod(l - 1, p)
            if i == j:
                continue  # two offsets from the same block never coexist
            stay = (1.0 - rho) ** (j - i)
            trans = (1.0 - stay) / p + (stay if r == s else 0.0)
            values[k - 1, l - 1] = values[l - 1, k - 1] = pik * trans
    return PiklMatrix(values)


def deff(design_variance: float, srs_variance: float) -> float:
    """Design effect: variance ratio against simple random sampling."""
    if srs_variance <= 0.0:
        raise ConstantVariable("design effect undefined for a constant variable")
    return design_variance / srs_variance


def dmax_closed_form(kind: str, N: int, n: int) -> float:
    """Worst-case design effect over all non-constant study variables,
    under equal probabilities and N = n*p."""
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    if N == n:
        raise ValueError("worst-case ratio undefined for a census (N == n)")
    if kind == "ops":
        return (N - 1) / (N - n)
    if kind == "sys":
        return n * (N - 1) / (N - n)
    raise ValueError(f"unknown design kind {kind!r}")


def jacobi_eigenvalues(matrix: DesignMatrix, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm falls below
    ``tol`` times the Frobenius norm of the input.  Accurate and simple;
    meant for the small dense matrices produced here.
    """
    A = np.array(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    N = A.shape[0]
    norm = float(np.linalg.norm(A))
    if norm == 0.0 or N == 1:
        return np.sort(np.diag(A))

    def off_norm() -> float:
        off = A - np.diag(np.diag(A))
        return float(np.linalg.norm(off))

    for _ in range(max_sweeps):
        if off_norm() <= tol * norm:
            break
        for p in range(N - 1):
            for q in range(p + 1, N):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                app, aqq = A[p, p], A[q, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0
                for r in range(N):
                    if r == p or r == q:
                        continue
                    arp, arq = A[r, p], A[r, q]
                    A[r, p] = A[p, r] = c * arp - s * arq
                    A[r, q] = A[q, r] = s * arp + c * arq
    return np.sort(np.diag(A))


def eigen_dispersion(dm: DesignMatrix) -> tuple[np.ndarray, float]:
    """Sorted spectrum of a design covariance matrix and the variance of
    its eigenvalues.

    Smaller dispersion means the design bounds the estimator variance more
    evenly across all unit-norm study variables.
    """
    eigenvalues = jacobi_eigenvalues(dm)
    mean = float(np.mean(eigenvalues))
    delta = float(np.mean((eigenvalues - mean) ** 2))
    return eigenvalues, delta
