"""n-Leibniz / Filippov algebras as exact structure-constant tensors.

An algebra of arity n on dimension d is a rank-(n+1) tensor f whose first n
slots are bracket inputs and whose last slot is the (upper) output index.
All property checks are exact zero tests; failing checks carry the
lexicographically first nonzero entry that violates the property.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .tensor import (
    RationalTensor,
    ShapeError,
    antisymmetrize,
    format_rational,
    guard,
    parse_rational,
    raise_lower,
)

# Above this many elementary products the filippov check switches from
# materializing the residual tensor to the adjoint-span derivation check.
FULL_RESIDUAL_WORK_LIMIT = 5_000_000


class AlgebraFileError(ValueError):
    """Malformed algebra/trace-form file."""


class Metric:
    """Symmetric non-degenerate bilinear form on Q^d."""

    def __init__(self, entries):
        self.entries = [[Fraction(x) if not isinstance(x, int) else x for x in row] for row in entries]
        self.d = len(self.entries)
        for row in self.entries:
            if len(row) != self.d:
                raise ShapeError("metric matrix is not square")
        for i in range(self.d):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ShapeError("metric matrix is not symmetric")
        try:
            self.inverse = linalg.invert(self.entries) if self.d else []
        except linalg.SingularMatrixError as exc:
            raise ShapeError("metric is singular") from exc

    @classmethod
    def diag(cls, signs) -> "Metric":
        signs = list(signs)
        return cls([[signs[i] if i == j else 0 for j in range(len(signs))] for i in range(len(signs))])

    @classmethod
    def euclidean(cls, d: int) -> "Metric":
        return cls.diag([1] * d)

    @classmethod
    def lorentzian(cls, p: int, q: int) -> "Metric":
        return cls.diag([-1] * p + [1] * q)

    @property
    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.d)
            for j in range(self.d)
            if i != j
        )

    def diagonal(self):
        return [self.entries[i][i] for i in range(self.d)]

    def __eq__(self, other):
        if not isinstance(other, Metric):
            return NotImplemented
        return self.d == other.d and all(
            self.entries[i][j] == other.entries[i][j]
            for i in range(self.d)
            for j in range(self.d)
        )

    def __repr__(self):
        if self.is_diagonal:
            return f"Metric.diag({self.diagonal()})"
        return f"Metric({self.entries!r})"


@dataclass
class CheckReport:
    name: str
    passed: bool
    witness: tuple | None = None
    residual: object = None
    detail: str = ""

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("failing report must carry a witness")

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.residual is not None:
            out["residual"] = format_rational(self.residual)
        if self.detail:
            out["detail"] = self.detail
        return out


class NaryAlgebra:
    """Arity-n algebra with structure constants f (last slot = output)."""

    def __init__(self, name, d, n, f: RationalTensor, metric: Metric | None = None):
        if n < 2:
            raise ShapeError(f"arity must be >= 2, got {n}")
        if f.shape != (d,) * (n + 1):
            raise ShapeError(f"structure tensor shape {f.shape} != {(d,) * (n + 1)}")
        if metric is not None and metric.d != d:
            raise ShapeError(f"metric dim {metric.d} != algebra dim {d}")
        self.name = name
        self.d = d
        self.n = n
        self.f = f
        self.metric = metric
        self.flags: dict = {}
        self._cache: dict = {}

    def __eq__(self, other):
        if not isinstance(other, NaryAlgebra):
            return NotImplemented
        return (
            self.name == other.name
            and self.d == other.d
            and self.n == other.n
            and self.f == other.f
            and _metrics_equal(self.metric, other.metric)
        )

    def __repr__(self):
        return f"NaryAlgebra({self.name!r}, d={self.d}, n={self.n}, nnz={self.f.nnz})"

    def require_metric(self, metric: Metric | None = None) -> Metric:
        metric = metric if metric is not None else self.metric
        if metric is None:
            raise ShapeError(f"algebra {self.name!r} has no metric and none was supplied")
        if metric.d != self.d:
            raise ShapeError(f"metric dim {metric.d} != algebra dim {self.d}")
        return metric

    def lowered(self, metric: Metric | None = None) -> RationalTensor:
        """Structure constants with the output slot lowered by the metric."""
        metric = self.require_metric(metric)
        key = ("lowered", id(metric))
        if key not in self._cache:
            self._cache[key] = raise_lower(self.f, self.n + 1, metric, "lower")
        return self._cache[key]

    def ad_rows(self) -> dict:
        """Group f by the first n-1 slots: A -> {l: {s: value}}."""
        if "ad_rows" not in self._cache:
            rows: dict = {}
            cut = self.n - 1
            for key, val in self.f.data.items():
                rows.setdefault(key[:cut], {}).setdefault(key[cut], {})[key[cut + 1]] = val
            self._cache["ad_rows"] = rows
        return self._cache["ad_rows"]

    def input_rows(self) -> dict:
        """Group f by all n input slots: inputs -> {output: value}."""
        if "input_rows" not in self._cache:
            rows: dict = {}
            for key, val in self.f.data.items():
                rows.setdefault(key[:-1], {})[key[-1]] = val
            self._cache["input_rows"] = rows
        return self._cache["input_rows"]


def _metrics_equal(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a == b


# ---------------------------------------------------------------------------
# canonical builders


def simple_filippov(n: int, signature) -> NaryAlgebra:
    """The (n+1)-dimensional simple algebra: eps with one index raised.

    f_{a1..an}^b = eta^{b a_{n+1}} eps_{a1..an a_{n+1}} with eta = diag(signature).
    """
    signature = list(signature)
    if len(signature) != n + 1:
        raise ShapeError(f"signature length {len(signature)} != n+1 = {n + 1}")
    if any(s not in (1, -1) for s in signature):
        raise ShapeError("signature entries must be +1 or -1")
    from .tensor import levi_civita

    d = n + 1
    eps = levi_civita(d)
    data = {}
    for key, val in eps.data.items():
        b = key[n]
        data[key] = signature[b - 1] * val
    p = signature.count(-1)
    name = f"A{d}" if p == 0 else f"A{p}+{d - p}"
    return NaryAlgebra(name, d, n, RationalTensor((d,) * (n + 1), data), Metric.diag(signature))


def zero_algebra(d: int, n: int, name: str | None = None) -> NaryAlgebra:
    return NaryAlgebra(
        name or f"zero({d},{n})", d, n, RationalTensor((d,) * (n + 1)),
        Metric.euclidean(d) if d else None,
    )


def direct_sum(a: NaryAlgebra, b: NaryAlgebra) -> NaryAlgebra:
    """Ideal direct sum; all mixed structure constants vanish."""
    if a.n != b.n:
        raise ShapeError(f"arity mismatch: {a.n} != {b.n}")
    d = a.d + b.d
    data = dict(a.f.data)
    for key, val in b.f.data.items():
        data[tuple(i + a.d for i in key)] = val
    metric = None
    if a.metric is not None and b.metric is not None:
        rows = []
        for i in range(d):
            row = [0] * d
            for j in range(d):
                if i < a.d and j < a.d:
                    row[j] = a.metric.entries[i][j]
                elif i >= a.d and j >= a.d:
                    row[j] = b.metric.entries[i - a.d][j - a.d]
            rows.append(row)
        metric = Metric(rows)
    return NaryAlgebra(
        f"{a.name}+{b.name}", d, a.n, RationalTensor((d,) * (a.n + 1), data), metric
    )


# ---------------------------------------------------------------------------
# the Filippov identity


def _matrix_cols(rows: dict) -> dict:
    cols: dict = {}
    for b, row in rows.items():
        for l, val in row.items():
            cols.setdefault(l, {})[b] = val
    return cols


def _derivation_terms(f: RationalTensor, arity: int, mrows: dict, out: dict, suffix=()):
    """Accumulate  f_B^l M_l^s - sum_k M_{b_k}^l f_{..l..}^s  into out.

    mrows maps lower index l -> {upper s: value}.  Keys written are
    B + suffix + (s,).
    """
    mcols = _matrix_cols(mrows)
    for key, val in f.data.items():
        inputs, l0 = key[:-1], key[-1]
        row = mrows.get(l0)
        if row:
            head = inputs + suffix
            for s, mv in row.items():
                _acc_dict(out, head + (s,), val * mv)
        for k in range(arity):
            col = mcols.get(inputs[k])
            if col:
                for b, mv in col.items():
                    new = inputs[:k] + (b,) + inputs[k + 1:] + suffix + (key[-1],)
                    _acc_dict(out, new, -val * mv)


def _acc_dict(store: dict, key: tuple, val) -> None:
    cur = store.get(key)
    if cur is None:
        store[key] = val
    else:
        cur = cur + val
        if cur == 0:
            del store[key]
        else:
            store[key] = cur


def _fi_work_estimate(L: NaryAlgebra) -> int:
    return len(L.ad_rows()) * L.f.nnz * (L.n + 1)


def filippov_residual(L: NaryAlgebra) -> RationalTensor:
    """Residual tensor of the (left) Filippov identity.

    Entry at (b1..bn, a1..a_{n-1}, s) is
    f_{b1..bn}^l f_{a1..a_{n-1} l}^s - sum_k f_{a1..a_{n-1} b_k}^l f_{b1.. l ..bn}^s;
    the algebra satisfies the identity iff this is the zero tensor.
    """
    guard(_fi_work_estimate(L), f"filippov_residual({L.name})")
    n, d = L.n, L.d
    out: dict = {}
    for a_tuple, mrows in sorted(L.ad_rows().items()):
        slice_acc: dict = {}
        _derivation_terms(L.f, n, mrows, slice_acc)
        for key, val in slice_acc.items():
            out[key[:-1] + a_tuple + (key[-1],)] = val
    return RationalTensor((d,) * (2 * n), out)


def _adjoint_span_representatives(L: NaryAlgebra):
    """Fundamental-object tuples whose ad matrices span the whole ad space."""
    d = L.d
    eb = linalg.EchelonBasis(d * d)
    reps = []
    for a_tuple, mrows in sorted(L.ad_rows().items()):
        vec = [0] * (d * d)
        for l, row in mrows.items():
            for s, val in row.items():
                vec[(l - 1) * d + (s - 1)] = val
        if eb.insert(vec):
            reps.append((a_tuple, mrows))
    return reps


def check_filippov(L: NaryAlgebra) -> CheckReport:
    """Exact FI check; stamps the 'filippov' flag.

    Small algebras materialize the full residual (witness = lexicographically
    first nonzero residual entry).  Large ones use the equivalent derivation
    check over a spanning set of adjoint matrices: the residual is linear in
    ad_A, so vanishing on a spanning set is vanishing everywhere.
    """
    if _fi_work_estimate(L) <= FULL_RESIDUAL_WORK_LIMIT:
        res = filippov_residual(L)
        if res.data:
            witness = min(res.data)
            report = CheckReport("filippov", False, witness, res.data[witness])
        else:
            report = CheckReport("filippov", True)
    else:
        report = CheckReport("filippov", True, detail="adjoint-span derivation check")
        for a_tuple, mrows in _adjoint_span_representatives(L):
            acc: dict = {}
            _derivation_terms(L.f, L.n, mrows, acc)
            if acc:
                key = min(acc)
                witness = key[:-1] + a_tuple + (key[-1],)
                report = CheckReport(
                    "filippov", False, witness, acc[key],
                    detail="adjoint-span derivation check",
                )
                break
    L.flags["filippov"] = report.passed
    return report


def filippov_sampled(L: NaryAlgebra, samples: int = 10_000, seed: int = 12345) -> CheckReport:
    """FI residual on pseudo-randomly sampled (b-tuple, a-tuple) slices.

    Every sampled slice is checked exactly over all output indices; intended
    for algebras whose full residual is out of reach.
    """
    import random

    rng = random.Random(seed)
    rows = L.input_rows()
    n, d = L.n, L.d
    for _ in range(samples):
        b = tuple(rng.randint(1, d) for _ in range(n))
        a = tuple(rng.randint(1, d) for _ in range(n - 1))
        acc: dict = {}
        for l, v in rows.get(b, {}).items():
            for s, w in rows.get(a + (l,), {}).items():
                _acc_dict(acc, s, v * w)
        for k in range(n):
            for l, v in rows.get(a + (b[k],), {}).items():
                for s, w in rows.get(b[:k] + (l,) + b[k + 1:], {}).items():
                    _acc_dict(acc, s, -v * w)
        if acc:
            s = min(acc)
            return CheckReport(
                "filippov", False, b + a + (s,), acc[s],
                detail=f"sampled check ({samples} slices, seed {seed})",
            )
    return CheckReport(
        "filippov", True, detail=f"sampled check ({samples} slices, seed {seed})"
    )


# ---------------------------------------------------------------------------
# symmetry / metric property checks


def _first_antisymmetry_failure(t: RationalTensor, s1: int, s2: int):
    """Lex-first nonzero entry with t[key] != -t[swap(key)], or None."""
    best = None
    for key in t.data:
        swapped = list(key)
        swapped[s1 - 1], swapped[s2 - 1] = swapped[s2 - 1], swapped[s1 - 1]
        swapped = tuple(swapped)
        total = t.data[key] + t.data.get(swapped, 0)
        if total != 0:
            cand = min(key, swapped) if swapped in t.data else key
            if best is None or cand < best[0]:
                best = (cand, total)
    return best


def _skew_report(t: RationalTensor, slots, name: str) -> CheckReport:
    slots = list(slots)
    best = None
    for i in range(len(slots) - 1):
        fail = _first_antisymmetry_failure(t, slots[i], slots[i + 1])
        if fail and (best is None or fail[0] < best[0]):
            best = fail
    if best:
        return CheckReport(name, False, best[0], best[1])
    return CheckReport(name, True)


def check_skew(L: NaryAlgebra, slots) -> CheckReport:
    """Antisymmetry of the bracket under every transposition inside slots."""
    slots = list(slots)
    if not slots or slots[0] < 1 or slots[-1] > L.n:
        raise ShapeError(f"slots {slots} not within 1..{L.n}")
    return _skew_report(L.f, slots, "skew")


def check_metricity(L: NaryAlgebra, metric: Metric | None = None) -> CheckReport:
    """Invariance of the metric: lowered constants antisymmetric in the last two slots."""
    low = L.lowered(metric)
    report = _skew_report(low, [L.n, L.n + 1], "metricity")
    L.flags["metric"] = report.passed
    return report


def check_full_antisym_lowered(L: NaryAlgebra, metric: Metric | None = None) -> CheckReport:
    low = L.lowered(metric)
    return _skew_report(low, range(1, L.n + 2), "fullanti")


def check_symmetry_property(L: NaryAlgebra, metric: Metric | None = None) -> CheckReport:
    """Pair-exchange symmetry of the lowered constants in their last four slots.

    For arity 3 this is the defining symmetry of the CS-type algebras:
    g_{a1 a2 b1 b2} = g_{b1 b2 a1 a2}.
    """
    if L.n < 3:
        raise ShapeError("symmetry property needs arity >= 3")
    low = L.lowered(metric)
    best = None
    for key in low.data:
        swapped = key[:-4] + key[-2:] + key[-4:-2]
        diff = low.data[key] - low.data.get(swapped, 0)
        if diff != 0:
            cand = min(key, swapped) if swapped in low.data else key
            if best is None or cand < best[0]:
                best = (cand, diff)
    if best:
        return CheckReport("symmetry", False, best[0], best[1])
    return CheckReport("symmetry", True)


def _block_symmetry_report(low: RationalTensor, block: int) -> CheckReport:
    best = None
    for key in low.data:
        swapped = key[block:] + key[:block]
        diff = low.data[key] - low.data.get(swapped, 0)
        if diff != 0:
            cand = min(key, swapped) if swapped in low.data else key
            if best is None or cand < best[0]:
                best = (cand, diff)
    if best:
        return CheckReport("blocksym", False, best[0], best[1])
    return CheckReport("blocksym", True)


def check_generalized_metric_l(L: NaryAlgebra, metric: Metric | None = None) -> CheckReport:
    """Generalized metric ell-algebra axioms for odd arity ell = 2n-3.

    Skew in the first n-1 and next n-2 slots, metric, symmetric under the
    exchange of the two (n-1)-index blocks of the lowered constants, and FI.
    """
    ell = L.n
    if ell % 2 == 0 or ell < 3:
        raise ShapeError(f"generalized metric check needs odd arity >= 3, got {ell}")
    n = (ell + 3) // 2
    metric = L.require_metric(metric)
    sub = [
        check_skew(L, range(1, n)),
        check_skew(L, range(n, ell + 1)),
        check_metricity(L, metric),
        _block_symmetry_report(L.lowered(metric), n - 1),
        check_filippov(L),
    ]
    for rep in sub:
        if not rep.passed:
            return CheckReport("genmetric", False, rep.witness, rep.residual,
                               detail=f"failed {rep.name}")
    return CheckReport("genmetric", True)


# ---------------------------------------------------------------------------
# cyclic property, triple and n-ple systems


def cyclic_sum(L: NaryAlgebra) -> RationalTensor:
    """Sum of the n cyclic rotations of the bracket input slots."""
    guard(L.f.nnz * L.n, f"cyclic_sum({L.name})")
    out: dict = {}
    for key, val in L.f.data.items():
        inputs, s = key[:-1], key[-1]
        for shift in range(L.n):
            rotated = inputs[shift:] + inputs[:shift]
            _acc_dict(out, rotated + (s,), val)
    return RationalTensor(L.f.shape, out)


def full_antisymmetrization(L: NaryAlgebra) -> RationalTensor:
    """Unnormalized signed sum over all n! permutations of the input slots."""
    return antisymmetrize(L.f, range(1, L.n + 1), normalized=False)


def check_cyclic(L: NaryAlgebra) -> CheckReport:
    c = cyclic_sum(L)
    if c.data:
        witness = min(c.data)
        return CheckReport("cyclic", False, witness, c.data[witness])
    return CheckReport("cyclic", True)


def is_lie_triple(L: NaryAlgebra) -> CheckReport:
    """Arity 3, skew in the first two slots, FI, and vanishing cyclic sum."""
    if L.n != 3:
        report = CheckReport("triple", False, (0,), None, detail=f"arity {L.n} != 3")
        L.flags["triple"] = False
        return report
    for rep in (check_skew(L, [1, 2]), check_filippov(L), check_cyclic(L)):
        if not rep.passed:
            report = CheckReport("triple", False, rep.witness, rep.residual,
                                 detail=f"failed {rep.name}")
            L.flags["triple"] = False
            return report
    L.flags["triple"] = True
    return CheckReport("triple", True)


def is_lie_nple(L: NaryAlgebra) -> CheckReport:
    """Skew in the first n-1 slots, FI, and vanishing cyclic sum."""
    for rep in (check_skew(L, range(1, L.n)), check_filippov(L), check_cyclic(L)):
        if not rep.passed:
            report = CheckReport("nple", False, rep.witness, rep.residual,
                                 detail=f"failed {rep.name}")
            L.flags["nple"] = False
            return report
    L.flags["nple"] = True
    return CheckReport("nple", True)


# ---------------------------------------------------------------------------
# file format


def _metric_to_json(metric: Metric | None):
    if metric is None:
        return None
    if metric.is_diagonal and all(x in (1, -1) for x in metric.diagonal()):
        return {"diag": [int(x) for x in metric.diagonal()]}
    return {"matrix": [[format_rational(x) for x in row] for row in metric.entries]}


def _metric_from_json(obj, d: int) -> Metric:
    if not isinstance(obj, dict):
        raise AlgebraFileError("metric must be an object")
    if "diag" in obj:
        diag = obj["diag"]
        if not isinstance(diag, list) or len(diag) != d:
            raise AlgebraFileError("metric diag has wrong length")
        if any(not isinstance(x, int) or x == 0 for x in diag):
            raise AlgebraFileError("metric diag entries must be nonzero integers")
        return Metric.diag(diag)
    if "matrix" in obj:
        rows = obj["matrix"]
        if not isinstance(rows, list) or len(rows) != d:
            raise AlgebraFileError("metric matrix has wrong size")
        try:
            return Metric([[parse_rational(x) for x in row] for row in rows])
        except (ValueError, ShapeError) as exc:
            raise AlgebraFileError(f"bad metric matrix: {exc}") from exc
    raise AlgebraFileError("metric needs 'diag' or 'matrix'")


def to_json_dict(L: NaryAlgebra) -> dict:
    out = {"name": L.name, "dim": L.d, "arity": L.n}
    metric = _metric_to_json(L.metric)
    if metric is not None:
        out["metric"] = metric
    out["entries"] = [
        {"in": list(key[:-1]), "out": key[-1], "val": format_rational(val)}
        for key, val in L.f.entries()
    ]
    return out


def from_json_dict(obj: dict) -> NaryAlgebra:
    if not isinstance(obj, dict):
        raise AlgebraFileError("algebra file must hold a JSON object")
    try:
        name = obj["name"]
        d = obj["dim"]
        n = obj["arity"]
        entries = obj["entries"]
    except KeyError as exc:
        raise AlgebraFileError(f"missing field {exc}") from exc
    if not isinstance(d, int) or d < 0 or not isinstance(n, int) or n < 2:
        raise AlgebraFileError(f"bad dim/arity ({d}, {n})")
    if not isinstance(entries, list):
        raise AlgebraFileError("'entries' must be a list")
    data = {}
    for ent in entries:
        try:
            idx = tuple(ent["in"]) + (ent["out"],)
            val = parse_rational(ent["val"])
        except (KeyError, TypeError, ValueError) as exc:
            raise AlgebraFileError(f"bad entry {ent!r}: {exc}") from exc
        if len(idx) != n + 1:
            raise AlgebraFileError(f"entry {ent!r} has wrong index count")
        if any(not isinstance(i, int) or not 1 <= i <= d for i in idx):
            raise AlgebraFileError(f"entry index {idx} out of 1..{d}")
        if idx in data:
            raise AlgebraFileError(f"duplicate entry for index {idx}")
        data[idx] = val
    metric = _metric_from_json(obj["metric"], d) if "metric" in obj else None
    return NaryAlgebra(name, d, n, RationalTensor((d,) * (n + 1), data), metric)


def save(L: NaryAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(L), fh, indent=1)
        fh.write("\n")


def load(path) -> NaryAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraFileError(f"not valid JSON: {exc}") from exc
    return from_json_dict(obj)
