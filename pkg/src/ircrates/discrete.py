"""Exact rate-bound evaluation on finite-alphabet joint distributions.

Everything here is dense-tensor arithmetic: a joint pmf is a numpy array
with one axis per named variable, and every information measure is an
exact sum over the product alphabet (0 log 0 = 0).  This module is the
oracle side of the rate formulas, so no sampling or sparsity shortcuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

__all__ = [
    "JointPmf",
    "BiLevelFactorization",
    "SingleLevelFactorization",
    "entropy",
    "conditional_mutual_information",
    "bi_level_bounds",
    "single_level_bounds",
    "load_factorization",
]

_MAX_TABLE_ENTRIES = 10**6
_SUM_TOL = 1e-12


@dataclass(frozen=True)
class JointPmf:
    """A joint distribution over named finite-alphabet variables."""

    names: Tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", table)
        if table.ndim != len(self.names):
            raise ValueError(
                f"{len(self.names)} variable names for a rank-{table.ndim} table"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if table.size > _MAX_TABLE_ENTRIES:
            raise ValueError(
                f"table has {table.size} entries, cap is {_MAX_TABLE_ENTRIES}"
            )
        if np.any(table < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(table.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {table.sum()!r}, not 1")

    @property
    def alphabet_sizes(self) -> Dict[str, int]:
        return dict(zip(self.names, self.table.shape))

    def axes(self, names: Sequence[str]) -> Tuple[int, ...]:
        missing = [n for n in names if n not in self.names]
        if missing:
            raise ValueError(f"unknown variables {missing}; have {self.names}")
        return tuple(self.names.index(n) for n in names)

    def marginal(self, keep: Sequence[str]) -> "JointPmf":
        """Marginalize onto ``keep`` (result axes follow the original order)."""
        keep_axes = set(self.axes(keep))
        drop = tuple(i for i in range(self.table.ndim) if i not in keep_axes)
        kept_names = tuple(n for i, n in enumerate(self.names) if i in keep_axes)
        return JointPmf(kept_names, self.table.sum(axis=drop))


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entropy(pmf: JointPmf, names: Sequence[str]) -> float:
    """Joint Shannon entropy H(names) in bits."""
    return float(-_xlogx(pmf.marginal(names).table).sum())


def conditional_mutual_information(
    pmf: JointPmf,
    group_a: Sequence[str],
    group_b: Sequence[str],
    group_c: Sequence[str] = (),
) -> float:
    """I(A; B | C) in bits by exact summation; C empty gives plain MI.

    Computed as sum p(a,b,c) log2[ p(a,b,c) p(c) / (p(a,c) p(b,c)) ], which
    stays independent of the entropy-decomposition identity used as the
    test oracle.
    """
    a, b, c = tuple(group_a), tuple(group_b), tuple(group_c)
    for x, y in ((a, b), (a, c), (b, c)):
        overlap = set(x) & set(y)
        if overlap:
            raise ValueError(f"variable groups overlap: {sorted(overlap)}")

    sub = pmf.marginal(a + b + c)
    p_abc = sub.table
    ax_a, ax_b = sub.axes(a), sub.axes(b)
    p_ac = p_abc.sum(axis=ax_b, keepdims=True)
    p_bc = p_abc.sum(axis=ax_a, keepdims=True)
    p_c = p_ac.sum(axis=ax_a, keepdims=True)

    mask = p_abc > 0
    num = p_abc[mask] * np.broadcast_to(p_c, p_abc.shape)[mask]
    den = (
        np.broadcast_to(p_ac, p_abc.shape)[mask]
        * np.broadcast_to(p_bc, p_abc.shape)[mask]
    )
    total = float(np.sum(p_abc[mask] * np.log2(num / den)))
    return max(total, 0.0)  # clip tiny negative round-off


def _check_conditional(name: str, table: np.ndarray, cond_rank: int):
    """Validate that trailing axes of ``table`` sum to 1 for every prefix."""
    out_axes = tuple(range(cond_rank, table.ndim))
    if np.any(table < 0):
        raise ValueError(f"{name}: probabilities must be nonnegative")
    sums = table.sum(axis=out_axes) if out_axes else table
    if np.any(np.abs(sums - 1.0) > 1e-9):
        raise ValueError(f"{name}: conditional rows must each sum to 1")


@dataclass(frozen=True)
class BiLevelFactorization:
    """Product-form input distribution for the bi-level compression bounds.

    Axis conventions (conditioning axes first):
        p_x1[x1], p_x2[x2], p_u1[u1], p_u2[u2],
        p_xr_given_u[u1, u2, xr],
        p_y_given_x[x1, x2, xr, y1, y2, yr],
        p_yh1_given[yr, u1, yh1], p_yh2_given[yr, u2, yh2].
    """

    p_x1: np.ndarray
    p_x2: np.ndarray
    p_u1: np.ndarray
    p_u2: np.ndarray
    p_xr_given_u: np.ndarray
    p_y_given_x: np.ndarray
    p_yh1_given: np.ndarray
    p_yh2_given: np.ndarray

    def __post_init__(self):
        for name in ("p_x1", "p_x2", "p_u1", "p_u2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            _check_conditional(name, arr, 0)
        for name, cond in (
            ("p_xr_given_u", 2),
            ("p_y_given_x", 3),
            ("p_yh1_given", 2),
            ("p_yh2_given", 2),
        ):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            _check_conditional(name, arr, cond)

    def joint(self) -> JointPmf:
        """Assemble p(x1, x2, u1, u2, xr, y1, y2, yr, yh1, yh2)."""
        table = np.einsum(
            "a,b,c,d,cde,abefgh,hci,hdj->abcdefghij",
            self.p_x1, self.p_x2, self.p_u1, self.p_u2,
            self.p_xr_given_u, self.p_y_given_x,
            self.p_yh1_given, self.p_yh2_given,
            optimize=True,
        )
        names = ("x1", "x2", "u1", "u2", "xr", "y1", "y2", "yr", "yh1", "yh2")
        return JointPmf(names, table)


@dataclass(frozen=True)
class SingleLevelFactorization:
    """Product-form input distribution for the single-level compression bounds.

    Axis conventions: p_x1[x1], p_x2[x2], p_xr[xr],
    p_y_given_x[x1, x2, xr, y1, y2, yr], p_yh_given[yr, xr, yh].
    """

    p_x1: np.ndarray
    p_x2: np.ndarray
    p_xr: np.ndarray
    p_y_given_x: np.ndarray
    p_yh_given: np.ndarray

    def __post_init__(self):
        for name, cond in (
            ("p_x1", 0), ("p_x2", 0), ("p_xr", 0),
            ("p_y_given_x", 3), ("p_yh_given", 2),
        ):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            _check_conditional(name, arr, cond)

    def joint(self) -> JointPmf:
        """Assemble p(x1, x2, xr, y1, y2, yr, yh)."""
        table = np.einsum(
            "a,b,e,abefgh,heI->abefghI",
            self.p_x1, self.p_x2, self.p_xr, self.p_y_given_x, self.p_yh_given,
            optimize=True,
        )
        names = ("x1", "x2", "xr", "y1", "y2", "yr", "yh")
        return JointPmf(names, table)


def bi_level_bounds(
    fact: BiLevelFactorization,
) -> Tuple[float, float, bool]:
    """Per-user rate caps and feasibility of the bi-level compression scheme.

    Returns (R1_cap, R2_cap, feasible) where feasibility requires each
    destination's compression-description rate not to exceed what it can
    decode from the relay's superposition layer.
    """
    pmf = fact.joint()
    r1 = conditional_mutual_information(pmf, ("x1",), ("y1", "yh1"), ("u1",))
    r2 = conditional_mutual_information(pmf, ("x2",), ("y2", "yh2"), ("u2",))
    feasible = (
        conditional_mutual_information(pmf, ("yr",), ("yh1",), ("u1", "y1"))
        <= conditional_mutual_information(pmf, ("u1",), ("y1",)) + _SUM_TOL
    ) and (
        conditional_mutual_information(pmf, ("yr",), ("yh2",), ("u2", "y2"))
        <= conditional_mutual_information(pmf, ("u2",), ("y2",)) + _SUM_TOL
    )
    return r1, r2, feasible


def single_level_bounds(
    fact: SingleLevelFactorization,
) -> Tuple[float, float, bool]:
    """Per-user rate caps and feasibility of the single-level compression scheme."""
    pmf = fact.joint()
    r1 = conditional_mutual_information(pmf, ("x1",), ("y1", "yh"), ("xr",))
    r2 = conditional_mutual_information(pmf, ("x2",), ("y2", "yh"), ("xr",))
    lhs = max(
        conditional_mutual_information(pmf, ("yr",), ("yh",), ("xr", "y1")),
        conditional_mutual_information(pmf, ("yr",), ("yh",), ("xr", "y2")),
    )
    rhs = min(
        conditional_mutual_information(pmf, ("xr",), ("y1",)),
        conditional_mutual_information(pmf, ("xr",), ("y2",)),
    )
    return r1, r2, lhs <= rhs + _SUM_TOL


# -- factorization text files -------------------------------------------------
#
# Line-oriented format; '#' starts a comment.  The first directive is
# `mode single` or `mode bi`.  Each factor is declared as
#
#     factor OUT1,OUT2,... | COND1,COND2,... : SIZE1 SIZE2 ...
#
# (`| ...` omitted for unconditional factors; SIZEk are the alphabet sizes
# of the output variables, conditioning sizes being already known).  The
# probabilities follow as whitespace-separated numbers, row-major over the
# conditioning variables then the output variables.

_SINGLE_FACTORS = {
    ("x1",): (),
    ("x2",): (),
    ("xr",): (),
    ("y1", "y2", "yr"): ("x1", "x2", "xr"),
    ("yh",): ("yr", "xr"),
}
_BI_FACTORS = {
    ("x1",): (),
    ("x2",): (),
    ("u1",): (),
    ("u2",): (),
    ("xr",): ("u1", "u2"),
    ("y1", "y2", "yr"): ("x1", "x2", "xr"),
    ("yh1",): ("yr", "u1"),
    ("yh2",): ("yr", "u2"),
}


def _tokenize(path) -> list:
    tokens = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    return tokens


def load_factorization(path):
    """Parse a factorization file into the matching factorization object."""
    tokens = _tokenize(path)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"{path}: unexpected end of file")
        tok = tokens[pos]
        pos += 1
        return tok

    if take() != "mode":
        raise ValueError(f"{path}: file must start with a 'mode' directive")
    mode = take()
    if mode not in ("single", "bi"):
        raise ValueError(f"{path}: mode must be 'single' or 'bi', got {mode!r}")
    expected = _SINGLE_FACTORS if mode == "single" else _BI_FACTORS

    sizes: Dict[str, int] = {}
    factors: Dict[Tuple[str, ...], np.ndarray] = {}
    while pos < len(tokens):
        if take() != "factor":
            raise ValueError(f"{path}: expected 'factor' directive")
        spec = []
        while tokens[pos] != ":":
            spec.append(take())
        take()  # consume ':'
        spec_str = " ".join(spec)
        if "|" in spec:
            bar = spec.index("|")
            outs = tuple(v for tok in spec[:bar] for v in tok.split(",") if v)
            conds = tuple(v for tok in spec[bar + 1 :] for v in tok.split(",") if v)
        else:
            outs = tuple(v for tok in spec for v in tok.split(",") if v)
            conds = ()
        if outs not in expected or expected[outs] != conds:
            raise ValueError(f"{path}: unexpected factor '{spec_str}' for mode {mode}")
        out_sizes = []
        for _ in outs:
            out_sizes.append(int(take()))
        for name, size in zip(outs, out_sizes):
            if sizes.setdefault(name, size) != size:
                raise ValueError(f"{path}: conflicting alphabet size for {name}")
        try:
            cond_sizes = [sizes[c] for c in conds]
        except KeyError as exc:
            raise ValueError(
                f"{path}: factor '{spec_str}' conditions on undeclared {exc}"
            ) from None
        shape = tuple(cond_sizes) + tuple(out_sizes)
        count = int(np.prod(shape))
        values = np.array([float(take()) for _ in range(count)]).reshape(shape)
        factors[outs] = values

    missing = [k for k in expected if k not in factors]
    if missing:
        raise ValueError(f"{path}: missing factors {missing} for mode {mode}")

    if mode == "single":
        return SingleLevelFactorization(
            p_x1=factors[("x1",)],
            p_x2=factors[("x2",)],
            p_xr=factors[("xr",)],
            p_y_given_x=factors[("y1", "y2", "yr")],
            p_yh_given=factors[("yh",)],
        )
    return BiLevelFactorization(
        p_x1=factors[("x1",)],
        p_x2=factors[("x2",)],
        p_u1=factors[("u1",)],
        p_u2=factors[("u2",)],
        p_xr_given_u=factors[("xr",)],
        p_y_given_x=factors[("y1", "y2", "yr")],
        p_yh1_given=factors[("yh1",)],
        p_yh2_given=factors[("yh2",)],
    )
