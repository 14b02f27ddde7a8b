"""Explicit self-dual (extended) GRS codes and their verification.

For a GRS code with monomial generator rows ``(v_j a_j^i)_j``, the inner
product of rows ``i`` and ``i'`` is the power sum

    P_{i+i'} = sum_j v_j^2 a_j^(i+i'),

so self-orthogonality is a statement about ``P_0 .. P_{2k-2}`` alone.  The
extended code has one more column ``(0, ..., 0, 1)`` which adds 1 to the
last power sum.  Both checks are exact and cost ``O(n k)`` field operations.
"""

from __future__ import annotations

import hashlib
import itertools
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .chartool import CharacterReport, character_report
from .evalsets import ConstructionParams, EvalSet, LengthInfo, build, length_info
from .gf import GaloisField, build_field

MATRIX_METHOD_MAX_N = 512
ELIMINATION_MAX_N = 512
MDS_BRUTE_MAX_N = 16
_POWER_BLOCK = 1 << 21


class ScalingError(RuntimeError):
    """No candidate constant produced a self-dual code."""


# -- code description ----------------------------------------------------------

@dataclass(frozen=True)
class CodeSpec:
    """A GRS code of length ``n`` and dimension ``k = n/2``.

    ``points`` has ``n`` entries, or ``n - 1`` for an extended code whose last
    coordinate carries the coefficient of ``x^(k-1)``.
    """

    field: GaloisField
    n: int
    k: int
    extended: bool
    points: np.ndarray
    scaling: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        sc = np.asarray(self.scaling, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "scaling", sc)
        if self.n % 2 or self.k * 2 != self.n:
            raise ValueError(f"need even n and k = n/2, got n={self.n}, k={self.k}")
        want = self.n - 1 if self.extended else self.n
        if pts.size != want or sc.size != want:
            raise ValueError(f"expected {want} points and scalings")
        if (sc == 0).any():
            raise ValueError("scaling entries must be nonzero")
        if ((pts < 0) | (pts >= self.field.q)).any() or ((sc < 0) | (sc >= self.field.q)).any():
            raise ValueError("entries outside the field")

    @property
    def distinct_points(self) -> bool:
        return np.unique(self.points).size == self.points.size

    def with_scaling(self, scaling) -> "CodeSpec":
        return CodeSpec(self.field, self.n, self.k, self.extended, self.points, scaling)


@dataclass(frozen=True)
class GeneratorMatrix:
    spec: CodeSpec
    rows: np.ndarray  # k x n canonical encodings, monomial basis


def generator_matrix(spec: CodeSpec) -> GeneratorMatrix:
    """Rows ``(v_j a_j^i)`` for ``i < k``; extended codes add the unit column at row ``k-1``."""
    F = spec.field
    lv = F.log[spec.scaling]
    la = F.log[spec.points]
    i = np.arange(spec.k, dtype=np.int64)[:, None]
    body = F.exp[(lv[None, :] + i * np.maximum(la, 0)[None, :]) % F.order]
    zero_pt = la < 0
    if zero_pt.any():
        # 0^0 = 1, 0^i = 0 otherwise
        body[:, zero_pt] = 0
        body[0, zero_pt] = spec.scaling[zero_pt]
    if spec.extended:
        last = np.zeros((spec.k, 1), dtype=np.int64)
        last[-1, 0] = 1
        body = np.hstack([body, last])
    return GeneratorMatrix(spec, body)


# -- exact linear algebra over GF(q) ----------------------------------------

def _row_axpy(F: GaloisField, target: np.ndarray, coef: np.ndarray, row: np.ndarray) -> np.ndarray:
    """``target - coef[:, None] * row[None, :]``."""
    return F.sub(target, F.mul(coef[:, None], row[None, :]))


def rank(F: GaloisField, M: np.ndarray) -> int:
    """Rank by Gauss-Jordan elimination."""
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    rk = 0
    for c in range(cols):
        if rk == rows:
            break
        nz = np.flatnonzero(A[rk:, c])
        if nz.size == 0:
            continue
        piv = rk + nz[0]
        if piv != rk:
            A[[rk, piv]] = A[[piv, rk]]
        A[rk] = F.mul(A[rk], F.inv(A[rk, c]))
        others = np.flatnonzero(A[:, c])
        others = others[others != rk]
        if others.size:
            A[others] = _row_axpy(F, A[others], A[others, c], A[rk])
        rk += 1
    return rk


def batched_nonsingular(F: GaloisField, mats: np.ndarray) -> np.ndarray:
    """For a stack of square matrices, which ones are invertible."""
    A = np.array(mats, dtype=np.int64, copy=True)
    m, k, _ = A.shape
    alive = np.ones(m, dtype=bool)
    idx = np.arange(m)
    for c in range(k):
        col = A[:, c:, c]
        has = (col != 0).any(axis=1)
        alive &= has
        piv = c + np.argmax(col != 0, axis=1)
        # swap pivot row into place
        prow = A[idx, piv].copy()
        A[idx, piv] = A[:, c]
        A[:, c] = prow
        pv = A[:, c, c]
        safe = np.where(pv == 0, 1, pv)
        A[:, c] = F.mul(A[:, c], F.inv(safe)[:, None])
        if c + 1 < k:
            below = A[:, c + 1:, :]
            coef = below[:, :, c]
            A[:, c + 1:, :] = F.sub(below, F.mul(coef[:, :, None], A[:, c, None, :]))
    return alive


# -- verification ------------------------------------------------------------

def power_sums(spec: CodeSpec, count: int | None = None) -> np.ndarray:
    """``P_t = sum_j v_j^2 a_j^t`` for ``t = 0 .. count-1`` (default ``2k-1``)."""
    F = spec.field
    T = 2 * spec.k - 1 if count is None else count
    la = F.log[spec.points]
    lw = (2 * F.log[spec.scaling]) % F.order
    nz = la >= 0
    la_nz, lw_nz = la[nz], lw[nz]
    out = np.zeros(T, dtype=np.int64)
    rows = max(1, _POWER_BLOCK // max(la_nz.size, 1))
    for lo in range(0, T, rows):
        t = np.arange(lo, min(T, lo + rows), dtype=np.int64)[:, None]
        vals = F.exp[(lw_nz[None, :] + t * la_nz[None, :]) % F.order]
        out[lo:lo + t.shape[0]] = F.sum(vals, axis=1) if la_nz.size else 0
    if (~nz).any() and T > 0:
        # a zero point contributes v^2 to P_0 only
        out[0] = F.add(out[0], F.sum(F.exp[lw[~nz]]))
    return out


def _gram(G: GeneratorMatrix) -> np.ndarray:
    F = G.spec.field
    R = G.rows
    k = R.shape[0]
    out = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        out[i] = F.sum(F.mul(R[i][None, :], R), axis=1)
    return out


def _encode(spec: CodeSpec, msg: np.ndarray) -> np.ndarray:
    """Codeword of the message polynomial ``sum msg_i x^i`` by Horner's rule."""
    F = spec.field
    acc = np.zeros(spec.points.size, dtype=np.int64)
    for c in msg[::-1].tolist():
        acc = F.add(F.mul(acc, spec.points), c)
    word = F.mul(acc, spec.scaling)
    if spec.extended:
        word = np.append(word, msg[-1])
    return word


@dataclass
class VerifyReport:
    self_orthogonal: bool
    rank_ok: bool
    methods: dict[str, bool] = dc_field(default_factory=dict)
    rank_method: str = ""
    first_bad_t: int | None = None
    mds: bool | None = None
    mds_note: str = ""
    seconds: float = 0.0

    @property
    def self_dual(self) -> bool:
        return self.self_orthogonal and self.rank_ok


def structural_rank_ok(spec: CodeSpec) -> bool:
    """Rank ``k`` certificate: the first ``k`` columns form ``diag(v)`` times a Vandermonde
    matrix, whose determinant ``prod v_j prod_{i<j} (a_j - a_i)`` is evaluated exactly."""
    F = spec.field
    if spec.points.size < spec.k or not spec.distinct_points:
        return False
    a = spec.points[: spec.k]
    for i in range(a.size - 1):
        if (F.log[F.sub(a[i + 1:], a[i])] < 0).any():
            return False
    return bool((spec.scaling[: spec.k] != 0).all())


def verify_self_dual(spec: CodeSpec, matrix_method: bool | None = None, samples: int = 0,
                     seed: int = 0, G: GeneratorMatrix | None = None) -> VerifyReport:
    """Exact self-orthogonality by power sums, plus the optional matrix and sampling checks."""
    t0 = time.perf_counter()
    F = spec.field
    P = power_sums(spec)
    if spec.extended:
        P = P.copy()
        P[-1] = F.add(P[-1], 1)
    bad = np.flatnonzero(P != 0)
    rep = VerifyReport(self_orthogonal=bad.size == 0, rank_ok=False)
    rep.first_bad_t = int(bad[0]) if bad.size else None
    rep.methods["power_sum"] = rep.self_orthogonal

    if matrix_method is None:
        matrix_method = spec.n <= MATRIX_METHOD_MAX_N
    if matrix_method or spec.n <= ELIMINATION_MAX_N:
        G = G or generator_matrix(spec)
    if matrix_method:
        ok = not _gram(G).any()
        rep.methods["matrix"] = ok
        rep.self_orthogonal &= ok
    if samples:
        rng = np.random.default_rng(seed)
        ok = True
        for _ in range(samples):
            x = _encode(spec, rng.integers(0, F.q, spec.k))
            y = _encode(spec, rng.integers(0, F.q, spec.k))
            ok &= F.sum(F.mul(x, y)) == 0
        rep.methods["randomized"] = bool(ok)
        rep.self_orthogonal &= bool(ok)

    if spec.n <= ELIMINATION_MAX_N:
        rep.rank_ok = rank(F, G.rows) == spec.k
        rep.rank_method = "elimination"
    else:
        rep.rank_ok = structural_rank_ok(spec)
        rep.rank_method = "vandermonde"
    rep.seconds = time.perf_counter() - t0
    return rep


def verify_mds(spec: CodeSpec, G: GeneratorMatrix | None = None) -> tuple[bool | None, str]:
    """All ``k x k`` minors nonsingular (``n <= 16``); otherwise skipped."""
    if spec.n > MDS_BRUTE_MAX_N:
        return None, "skipped: guaranteed by the GRS structure; brute check infeasible"
    G = G or generator_matrix(spec)
    cols = np.array(list(itertools.combinations(range(spec.n), spec.k)), dtype=np.int64)
    mats = G.rows[:, cols].transpose(1, 0, 2)
    ok = bool(batched_nonsingular(spec.field, mats).all())
    return ok, f"{len(cols)} minors of size {spec.k}"


# -- synthesis -------------------------------------------------------------------

@dataclass
class ScalingChoice:
    spec: CodeSpec
    constant: str
    tried: list[str]
    report: VerifyReport


def _candidates(F: GaloisField, report: CharacterReport, extended: bool) -> list[tuple[str, int]]:
    theta = int(F.exp[1])
    mu = 1 if report.common_value == 1 else theta
    base = [("+1", 1), ("-1", F.neg(1)), ("mu", mu), ("-mu", F.neg(mu))]
    primary = "-1" if extended else "mu"
    return sorted(base, key=lambda c: c[0] != primary)


def solve_scaling(S: EvalSet, report: CharacterReport, extended: bool,
                  matrix_method: bool | None = None) -> ScalingChoice:
    """Scaling with ``v_a^2 = 1 / (lambda * delta_S(a))`` for the first constant ``lambda``
    that verifies.  Plain codes start from ``lambda = mu`` (1 if the common character
    is +1, otherwise the primitive element); extended codes from ``lambda = -1``."""
    F = S.field
    size = len(S)
    if extended:
        if size % 2 != 1:
            raise ScalingError(f"an extended code needs an odd set, got {size}")
        if not report.negated_uniform:
            raise ScalingError(f"eta(-delta) is not identically +1 (counts {report.counts()})")
        n = size + 1
    else:
        if size % 2 != 0:
            raise ScalingError(f"a plain code needs an even set, got {size}")
        if not report.uniform:
            raise ScalingError(f"eta(delta) is not constant on the set (counts {report.counts()})")
        n = size
    tried = []
    ld = F.log[report.deltas]
    last = None
    for name, lam in _candidates(F, report, extended):
        tried.append(name)
        lw = (-(F.log[lam] + ld)) % F.order
        if (lw & 1).any():
            continue
        v = F.exp[lw // 2]
        spec = CodeSpec(F, n, n // 2, extended, report.elements, v)
        vr = verify_self_dual(spec, matrix_method=matrix_method)
        last = vr
        if vr.self_dual:
            return ScalingChoice(spec, name, tried, vr)
    raise ScalingError(f"no candidate constant verified (tried {tried}; last report {last})")


@dataclass
class SynthesisResult:
    params: ConstructionParams | None
    info: LengthInfo | None
    evalset: EvalSet
    characters: CharacterReport
    choice: ScalingChoice
    seconds: float

    @property
    def spec(self) -> CodeSpec:
        return self.choice.spec

    @property
    def verify(self) -> VerifyReport:
        return self.choice.report


def synthesize(params: ConstructionParams, matrix_method: bool | None = None,
               spot: int = 32, seed: int = 0) -> SynthesisResult:
    """Build the set, check characters, choose a scaling and verify; raises on failure."""
    t0 = time.perf_counter()
    S = build(params)
    info = length_info(params)
    rep = character_report(S, spot=spot, seed=seed)
    choice = solve_scaling(S, rep, info.extended, matrix_method=matrix_method)
    if choice.spec.n != info.code_length:
        raise ScalingError(f"code length {choice.spec.n} differs from the closed form {info.code_length}")
    return SynthesisResult(params, info, S, rep, choice, time.perf_counter() - t0)


# -- file format --------------------------------------------------------------

MAGIC = "GRSSD v1"


class MatrixFileError(ValueError):
    pass


def _csv(vals) -> str:
    return ",".join(str(int(x)) for x in vals)


def matrix_text(G: GeneratorMatrix) -> str:
    spec = G.spec
    F = spec.field
    lines = [
        MAGIC,
        f"p={F.p} deg={F.degree} modulus={_csv(F.modulus)}",
        f"n={spec.n} k={spec.k} extended={int(spec.extended)}",
        f"points={_csv(spec.points)}",
        f"scaling={_csv(spec.scaling)}",
    ]
    lines += [" ".join(map(str, row.tolist())) for row in G.rows]
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"sha256={digest}\n"


def write_matrix(G: GeneratorMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(matrix_text(G))


def _kv(line: str) -> dict[str, str]:
    try:
        return dict(item.split("=", 1) for item in line.split())
    except ValueError:
        raise MatrixFileError(f"bad header line: {line[:60]!r}") from None


def read_matrix(path) -> GeneratorMatrix:
    """Parse and check a matrix file (checksum, field, shape, consistency with the header)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode()
    except UnicodeDecodeError:
        raise MatrixFileError("not a text file") from None
    body, sep, tail = text.rpartition("sha256=")
    if not sep or not body.endswith("\n"):
        raise MatrixFileError("missing checksum line")
    if hashlib.sha256(body.encode()).hexdigest() != tail.strip():
        raise MatrixFileError("checksum mismatch")
    lines = body.rstrip("\n").split("\n")
    if len(lines) < 5 or lines[0] != MAGIC:
        raise MatrixFileError("missing GRSSD v1 header")
    h1, h2 = _kv(lines[1]), _kv(lines[2])
    try:
        p, deg = int(h1["p"]), int(h1["deg"])
        modulus = tuple(int(x) for x in h1["modulus"].split(","))
        n, k, ext = int(h2["n"]), int(h2["k"]), bool(int(h2["extended"]))
        if deg % 2:
            raise MatrixFileError("odd extension degree")
        F = build_field(p, deg // 2)
        if tuple(F.modulus) != modulus:
            raise MatrixFileError(f"field mismatch: file modulus {modulus}, canonical {tuple(F.modulus)}")
        pts = np.array([int(x) for x in lines[3].removeprefix("points=").split(",") if x], dtype=np.int64)
        sc = np.array([int(x) for x in lines[4].removeprefix("scaling=").split(",") if x], dtype=np.int64)
        rows = np.array([[int(x) for x in ln.split()] for ln in lines[5:]], dtype=np.int64)
        spec = CodeSpec(F, n, k, ext, pts, sc)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, MatrixFileError):
            raise
        raise MatrixFileError(f"malformed matrix file: {exc}") from None
    if rows.shape != (k, n):
        raise MatrixFileError(f"expected a {k} x {n} matrix, found shape {rows.shape}")
    if not np.array_equal(rows, generator_matrix(spec).rows):
        raise MatrixFileError("matrix rows disagree with the declared points and scaling")
    return GeneratorMatrix(spec, rows)
