"""Dense truncations of Toeplitz, Hankel and block operators.

In the analytic basis e_k = t^k, k >= 0, the Toeplitz section carries
a_{j-k} and the Hankel section b_{j+k+1} (the image of PbQJ on monomials).
Block identities are checked on the symmetric Laurent window
t^-N .. t^(N-1); with an even window the flip J: t^k -> t^(-k-1) is an
exact involution on the basis and JPJ = Q holds entrywise, so the
operator identities below hold to rounding error for arbitrary symbols,
not only asymptotically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import hankel as _hankel_la
from scipy.linalg import toeplitz as _toeplitz_la

from .calculus import toeplitz_index
from .defaults import SPECTRAL_GAP, SV_THRESHOLD
from .errors import NoSpectralGap, PreconditionViolation
from .matching import MatchingPair
from . import symbols as sy
from .symbols import Monomial, PCSymbol, coefficient_range, laurent_coefficients


@dataclass(frozen=True)
class FiniteSectionMatrix:
    """Dense complex truncation with a basis tag.

    basis "analytic": e_k = t^k, k = 0..n-1.
    basis "laurent":  t^-N .. t^(N-1) for n = 2N.
    """

    entries: np.ndarray = field(repr=False)
    basis: str = "analytic"

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> "FiniteSectionMatrix":
        return FiniteSectionMatrix(self.entries.conj().T, self.basis)


def matrix_to_csv(m: FiniteSectionMatrix | np.ndarray) -> str:
    """Dense complex matrix as CSV rows (row, col, re, im)."""
    entries = m.entries if isinstance(m, FiniteSectionMatrix) else np.asarray(m)
    lines = ["row,col,re,im"]
    for j in range(entries.shape[0]):
        for k in range(entries.shape[1]):
            z = entries[j, k]
            lines.append(f"{j},{k},{z.real:.17g},{z.imag:.17g}")
    return "\n".join(lines) + "\n"


def toeplitz_matrix(a: PCSymbol, n: int) -> FiniteSectionMatrix:
    """n x n section with entries a_{j-k}."""
    if n < 1:
        raise PreconditionViolation("section size must be >= 1")
    coeffs = coefficient_range(a, -(n - 1), n - 1)
    col = coeffs[n - 1:]          # a_0, a_1, ..., a_{n-1}
    row = coeffs[: n][::-1]       # a_0, a_{-1}, ..., a_{-(n-1)}
    return FiniteSectionMatrix(_toeplitz_la(col, row))


def hankel_matrix(b: PCSymbol, n: int) -> FiniteSectionMatrix:
    """n x n section with entries b_{j+k+1}."""
    if n < 1:
        raise PreconditionViolation("section size must be >= 1")
    coeffs = coefficient_range(b, 1, 2 * n - 1)
    return FiniteSectionMatrix(_hankel_la(coeffs[:n], coeffs[n - 1:]))


def th_section(a: PCSymbol, b: PCSymbol, sign: int, n: int) -> FiniteSectionMatrix:
    """Section of T(a) + sign * H(b)."""
    return FiniteSectionMatrix(
        toeplitz_matrix(a, n).entries + sign * hankel_matrix(b, n).entries)


# ---------------------------------------------------------------------------
# Laurent-window block calculus
# ---------------------------------------------------------------------------


def multiplication_matrix(a: PCSymbol, half_window: int) -> np.ndarray:
    """Truncated bi-infinite multiplication operator on t^-N..t^(N-1)."""
    n = 2 * half_window
    coeffs = coefficient_range(a, -(n - 1), n - 1)
    col = coeffs[n - 1:]
    row = coeffs[: n][::-1]
    return _toeplitz_la(col, row)


def riesz_projection_matrix(half_window: int) -> np.ndarray:
    """P keeps the coefficients of t^k, k >= 0."""
    n = 2 * half_window
    diag = np.zeros(n)
    diag[half_window:] = 1.0  # basis index i corresponds to power i - N
    return np.diag(diag)


def flip_matrix(half_window: int) -> np.ndarray:
    """J: t^k -> t^(-k-1); a permutation of the even Laurent window."""
    n = 2 * half_window
    j = np.zeros((n, n))
    for i in range(n):
        k = i - half_window
        j[(-k - 1) + half_window, i] = 1.0
    return j


@dataclass(frozen=True)
class BlockAssembly:
    """All matrices of the 2x2 block picture on the Laurent window."""

    half_window: int
    P: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    X: np.ndarray = field(repr=False)         # PaP + Q
    Y: np.ndarray = field(repr=False)         # PbQ
    block_operator: np.ndarray = field(repr=False)
    diagonalized: np.ndarray = field(repr=False)
    conjugation_residual: float = 0.0

    def identity_residual(self) -> float:
        """Max entrywise defect of the 2x2 conjugation identity."""
        n = 2 * self.half_window
        eye = np.eye(n)
        left = 0.5 * np.block([[eye, eye], [self.J, -self.J]])
        right = np.block([[eye, self.J], [eye, -self.J]])
        lhs = np.block([[self.X, self.Y],
                        [self.J @ self.Y @ self.J, self.J @ self.X @ self.J]])
        rhs = left @ self.diagonalized @ right
        return float(np.max(np.abs(lhs - rhs)))


def block_assembly(a: PCSymbol, b: PCSymbol, half_window: int) -> BlockAssembly:
    """Assemble P, Q, J, the block operator

        [[PaP + Q, PbQ], [Q ~b P, Q ~a Q + P]]

    and the diagonal factor diag(X + YJ, X - YJ), checking that the second
    row of the block operator equals the flip conjugation of the first.
    """
    if half_window < 1:
        raise PreconditionViolation("half window must be >= 1")
    n = 2 * half_window
    P = riesz_projection_matrix(half_window)
    Q = np.eye(n) - P
    J = flip_matrix(half_window)
    Ma = multiplication_matrix(a, half_window)
    Mb = multiplication_matrix(b, half_window)
    Mat = multiplication_matrix(sy.tilde(a), half_window)
    Mbt = multiplication_matrix(sy.tilde(b), half_window)

    X = P @ Ma @ P + Q
    Y = P @ Mb @ Q
    block = np.block([[X, Y], [Q @ Mbt @ P, Q @ Mat @ Q + P]])
    flip_block = np.block([[X, Y], [J @ Y @ J, J @ X @ J]])
    conj_residual = float(np.max(np.abs(block - flip_block)))
    diag = np.block([
        [X + Y @ J, np.zeros((n, n))],
        [np.zeros((n, n)), X - Y @ J],
    ])
    return BlockAssembly(half_window, P, Q, J, X, Y, block, diag, conj_residual)


def idempotent_identity_residual(a_mat: np.ndarray, p_mat: np.ndarray) -> float:
    """Defect of  a p + (e - p) = (p a p + (e - p)) (e + (e - p) a p)."""
    e = np.eye(a_mat.shape[0])
    lhs = a_mat @ p_mat + (e - p_mat)
    rhs = (p_mat @ a_mat @ p_mat + (e - p_mat)) @ (e + (e - p_mat) @ a_mat @ p_mat)
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# exact entry-level product identities for band-limited symbols
# ---------------------------------------------------------------------------


def _coeff(d: dict, k: int) -> complex:
    return d.get(k, 0.0 + 0.0j)


def verify_product_identities(a: PCSymbol, b: PCSymbol, window: int) -> float:
    """Max entrywise deviation, over a square window of the infinite matrices, of

        T(ab) = T(a)T(b) + H(a)H(~b)    and    H(ab) = T(a)H(b) + H(a)T(~b).

    All sums are finite convolutions of the exact Laurent coefficients;
    non-band-limited symbols are rejected.
    """
    ca = laurent_coefficients(a)
    cb = laurent_coefficients(b)
    if not ca or not cb:
        return 0.0
    cab: dict[int, complex] = {}
    for k1, v1 in ca.items():
        for k2, v2 in cb.items():
            cab[k1 + k2] = cab.get(k1 + k2, 0.0) + v1 * v2
    lo_a, hi_a = min(ca), max(ca)
    lo_b, hi_b = min(cb), max(cb)

    err = 0.0
    for j in range(window):
        for k in range(window):
            # T(ab) vs T(a)T(b) + H(a)H(~b)
            tt = sum(_coeff(ca, j - m) * _coeff(cb, m - k)
                     for m in range(max(0, j - hi_a), j - lo_a + 1))
            hh = sum(_coeff(ca, j + m + 1) * _coeff(cb, -m - k - 1)
                     for m in range(0, max(0, hi_a - j)))
            err = max(err, abs(_coeff(cab, j - k) - tt - hh))
            # H(ab) vs T(a)H(b) + H(a)T(~b)
            th = sum(_coeff(ca, j - m) * _coeff(cb, m + k + 1)
                     for m in range(max(0, j - hi_a), j - lo_a + 1))
            ht = sum(_coeff(ca, j + m + 1) * _coeff(cb, k - m)
                     for m in range(0, max(0, hi_a - j)))
            err = max(err, abs(_coeff(cab, j + k + 1) - th - ht))
    return err


# ---------------------------------------------------------------------------
# numerical kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericalKernel:
    dimension: int
    basis: np.ndarray = field(repr=False)  # columns span the kernel
    sv_threshold: float = SV_THRESHOLD
    smallest_kept_sv: Optional[float] = None
    largest_dropped_sv: Optional[float] = None
    edge_dimension: int = 0  # truncation artifacts excluded from `dimension`


def numerical_kernel(m: FiniteSectionMatrix | np.ndarray,
                     sv_threshold: float = SV_THRESHOLD,
                     gap_factor: float = SPECTRAL_GAP) -> NumericalKernel:
    """SVD-based kernel with a mandatory spectral gap.

    A dimension is only reported when the smallest kept singular value
    exceeds the largest dropped one by ``gap_factor``; otherwise the run
    is inconclusive and NoSpectralGap is raised.  Null vectors whose mass
    concentrates at the top edge of the window track the truncation cut
    rather than any fixed H^p function (the shift section T_n(t) kills
    e_{n-1}, for example); they are excluded from ``dimension`` and
    counted in ``edge_dimension``.
    """
    entries = m.entries if isinstance(m, FiniteSectionMatrix) else np.asarray(m)
    _, s, vh = np.linalg.svd(entries)
    dropped = s < sv_threshold
    n_dropped = int(np.count_nonzero(dropped))
    largest_dropped = float(s[dropped].max()) if n_dropped else None
    smallest_kept = float(s[~dropped].min()) if n_dropped < len(s) else None
    if n_dropped and smallest_kept is not None:
        if largest_dropped > 0 and smallest_kept / largest_dropped < gap_factor:
            raise NoSpectralGap(
                f"kept/dropped ratio {smallest_kept / largest_dropped:.1f} "
                f"below required {gap_factor:.0f}")
        if smallest_kept < sv_threshold:
            raise NoSpectralGap("smallest kept singular value below the threshold")
    cols = entries.shape[1]
    vectors = []
    edge = 0
    top = int(0.75 * cols)
    for row in vh[len(s) - n_dropped:]:
        v = row.conj()
        if np.linalg.norm(v[top:]) ** 2 > 0.5:
            edge += 1
        else:
            vectors.append(v)
    basis = np.stack(vectors, axis=1) if vectors else np.zeros((cols, 0))
    return NumericalKernel(len(vectors), basis, sv_threshold, smallest_kept,
                           largest_dropped, edge)


def apply_operator(a: PCSymbol, b: PCSymbol, sign: int, poly: np.ndarray,
                   n_out: int = 256) -> np.ndarray:
    """First n_out coefficients of (T(a) + sign*H(b)) applied to a polynomial.

    The input is finitely supported, so every output coefficient is an
    exact finite sum of symbol coefficients; there is no truncation error
    on the input side.
    """
    x = np.asarray(poly, dtype=complex)
    deg = len(x) - 1
    ca = coefficient_range(a, -deg, n_out - 1)     # indices -deg .. n_out-1
    cb = coefficient_range(b, 1, n_out + deg)      # indices 1 .. n_out+deg
    t_part = np.convolve(ca, x)[deg: deg + n_out]
    h_part = np.convolve(cb, x[::-1])[deg: deg + n_out]
    return t_part + sign * h_part


# ---------------------------------------------------------------------------
# kernel dimension of diag(T(a)+H(b), T(a)-H(b)) from the subordinated pair
# ---------------------------------------------------------------------------


def projection_upper(rank: int, n: int) -> np.ndarray:
    """I - T(t^m) T(t^-m): the coordinate projection onto e_0..e_{m-1}.

    The degenerate rank-0 case (needed when an index vanishes) is the zero
    projection.
    """
    p = np.zeros((n, n))
    for i in range(min(rank, n)):
        p[i, i] = 1.0
    return p


@dataclass(frozen=True)
class KernelFormulaResult:
    dimension: int
    kappa1: int
    kappa2: int
    quadrant: str
    rank: Optional[int] = None
    alt_dimension: Optional[int] = None
    reduced_matrix: Optional[np.ndarray] = field(default=None, repr=False)


def kernel_formula_eval(pair: MatchingPair, p, n: int = 512,
                        sv_threshold: float = SV_THRESHOLD) -> KernelFormulaResult:
    """dim ker diag(T(a)+H(b), T(a)-H(b)) from the subordinated indices.

    With kappa1 = ind T(d) and kappa2 = ind T(c):

    * in the three sign-agreeing quadrants the dimension equals
      dim ker diag(T(d), T(c)) = max(kappa1, 0) + max(kappa2, 0);
    * for kappa1 >= 0 > kappa2 it is the kernel dimension of the
      finite-rank compression

          P_{-kappa2-1} T^-1(c t^kappa2) T((~a)^-1) T^-1(d t^kappa1)

      acting on im P_{kappa1-1}, realized on size-n sections, i.e.
      kappa1 - rank of a (-kappa2) x kappa1 matrix.  The variant with the
      projection of rank -kappa2 + 2 is evaluated alongside for logging.
    """
    kappa2 = toeplitz_index(pair.c, p).require()
    kappa1 = toeplitz_index(pair.d, p).require()

    if kappa1 >= 0 and kappa2 >= 0:
        return KernelFormulaResult(kappa1 + kappa2, kappa1, kappa2, "k1>=0,k2>=0")
    if kappa1 < 0 and kappa2 >= 0:
        return KernelFormulaResult(kappa2, kappa1, kappa2, "k1<0,k2>=0")
    if kappa1 < 0 and kappa2 < 0:
        return KernelFormulaResult(0, kappa1, kappa2, "k1<0,k2<0")

    # kappa1 >= 0 > kappa2: compress through the one-sided inverse sections
    u0 = sy.product(pair.c, Monomial(kappa2))      # index 0, T(u0) invertible
    v0 = sy.product(pair.d, Monomial(kappa1))      # index 0
    w = sy.inverse(sy.tilde(pair.a))

    def compression(size: int) -> np.ndarray:
        a_u0 = toeplitz_matrix(u0, size).entries
        a_v0 = toeplitz_matrix(v0, size).entries
        a_w = toeplitz_matrix(w, size).entries
        rhs = np.zeros((size, kappa1), dtype=complex)
        for j in range(kappa1):
            rhs[j, j] = 1.0
        z = np.linalg.solve(a_v0, rhs)     # T^-1(v0) on im P_{kappa1-1}
        return np.linalg.solve(a_u0, a_w @ z)

    m_full = compression(n)
    m_half = compression(max(n // 2, 8 * max(kappa1, -kappa2)))

    def dims(rows: int) -> tuple[int, int]:
        reduced = m_full[:rows, :]
        if not min(reduced.shape):
            return kappa1, 0
        s = np.linalg.svd(reduced, compute_uv=False)
        s_half = np.linalg.svd(m_half[:rows, :], compute_uv=False)
        scale = max(float(s.max()), 1e-30)
        rank = int(np.count_nonzero(s > max(sv_threshold, 1e-12 * scale)))
        # singular values near the section-error floor that still move when
        # the section size doubles have not converged: refuse to decide
        for sv, sv_half in zip(s, s_half):
            if sv_threshold < sv < 1e-2 * scale \
                    and abs(sv - sv_half) > 0.3 * max(sv, sv_half):
                raise NoSpectralGap(
                    f"compression singular value {sv:.2e} still moving between "
                    f"section sizes (was {sv_half:.2e}); dimension undecidable")
        return kappa1 - rank, rank

    dim, rank = dims(-kappa2)
    alt_dim, _ = dims(min(-kappa2 + 2, n))
    return KernelFormulaResult(dim, kappa1, kappa2, "k1>=0,k2<0", rank, alt_dim,
                               m_full[: -kappa2, :].copy())
