"""Uniqueness certificates for product Kraus families and product ensembles.

The certifier enumerates member subsets and eliminates each one by finding a
party split whose local span dimensions are too large for the subset to admit
a product linear combination with all coefficients nonzero.  If every subset
of size >= 2 is eliminated, no alternative product representation of the same
channel (or state) can exist and the certificate is Unique.  Surviving
subsets are returned as witnesses; they mean the certificate is Inconclusive,
never that the representation is actually non-unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._parallel import map_ordered
from .errors import EnumerationCapError, UsageError
from .linalg import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    frobenius,
    numerical_rank,
    proportional,
    span_dimension,
    vectorize,
)
from .families import (
    Bipartition,
    OperatorFamily,
    all_bipartitions,
    party_pairs,
)

#: Families larger than this are refused by certify_unique unless the caller
#: raises the cap explicitly; subset enumeration is exponential in N.
DEFAULT_ENUMERATION_CAP = 20

STRATEGY_PAIRS = "pairs"
STRATEGY_ALL_BIPARTITIONS = "all_bipartitions"


@dataclass(frozen=True)
class SplitSums:
    """Span dimensions of one examined split, restricted to a witness subset."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    delta_a: int
    delta_b: int

    def to_dict(self) -> dict:
        return {
            "side_a": list(self.side_a),
            "side_b": list(self.side_b),
            "delta_a": self.delta_a,
            "delta_b": self.delta_b,
        }


@dataclass(frozen=True)
class Witness:
    """A member subset that no examined split could eliminate.

    For every recorded split, delta_a + delta_b <= len(members) + 1, so a
    product linear combination over this subset is not ruled out.
    """

    members: tuple[int, ...]
    split_sums: tuple[SplitSums, ...]

    def to_dict(self) -> dict:
        return {
            "members": list(self.members),
            "split_sums": [s.to_dict() for s in self.split_sums],
        }


@dataclass(frozen=True)
class Certificate:
    """Outcome of the uniqueness check."""

    status: str  # "Unique" | "Inconclusive"
    witnesses: tuple[Witness, ...]
    strategy: str
    tol: TolerancePolicy
    subsets_examined: int
    n_members: int

    @property
    def unique(self) -> bool:
        return self.status == "Unique"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "strategy": self.strategy,
            "tolerance": self.tol.to_dict(),
            "subsets_examined": self.subsets_examined,
            "n_members": self.n_members,
        }


def _examined_splits(n_parties: int, strategy: str) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    if n_parties == 1:
        # A single party cannot be split; no subset is ever eliminated.
        return []
    if strategy == STRATEGY_PAIRS:
        return [((a,), (b,)) for a, b in party_pairs(n_parties)]
    if strategy == STRATEGY_ALL_BIPARTITIONS:
        return [(bp.side_a, bp.side_b) for bp in all_bipartitions(n_parties)]
    raise UsageError(
        f"unknown strategy {strategy!r}; expected "
        f"{STRATEGY_PAIRS!r} or {STRATEGY_ALL_BIPARTITIONS!r}"
    )


def default_strategy(n_parties: int) -> str:
    """All bipartitions up to six parties, party pairs beyond.

    Bipartitions eliminate at least everything pairs do, but their number
    grows as 2**(P-1) - 1 while pairs grow only quadratically.
    """
    return STRATEGY_ALL_BIPARTITIONS if n_parties <= 6 else STRATEGY_PAIRS


def certify_unique(
    fam: OperatorFamily,
    strategy: str | None = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    max_members: int = DEFAULT_ENUMERATION_CAP,
    fail_fast: bool = False,
) -> Certificate:
    """Certify that ``fam`` is the unique product representation of its channel.

    Enumerates every subset T of members with |T| = n >= 2 (increasing size,
    lexicographic within a size).  A subset is eliminated when some examined
    split has delta_A + delta_B > n + 1; any subset that survives every split
    is reported as a witness and the status is Inconclusive.  With
    ``fail_fast`` the scan stops at the first witness.

    Subsets may be evaluated in parallel (bounded by SEPCERT_THREADS); the
    certificate is a deterministic function of the inputs either way.
    """
    n = fam.n_members
    if n > max_members:
        raise EnumerationCapError(
            f"family has {n} members; exhaustive subset enumeration is capped "
            f"at {max_members} (2**{n} subsets). Raise max_members to override, "
            f"or use the pairs strategy to cut the per-subset cost."
        )
    if strategy is None:
        strategy = default_strategy(fam.n_parties)
    splits = _examined_splits(fam.n_parties, strategy)

    if n < 2:
        return Certificate("Unique", (), strategy, tol, 0, n)

    # One stacked matrix of vectorized grouped factors per distinct side;
    # a subset's span dimension is then the rank of a column selection.
    side_matrices: dict[tuple[int, ...], np.ndarray] = {}
    for side_a, side_b in splits:
        for side in (side_a, side_b):
            if side not in side_matrices:
                cols = [vectorize(g) for g in fam.grouped_factors(side)]
                side_matrices[side] = np.hstack(cols)

    def survives(subset: tuple[int, ...]) -> Witness | None:
        size = len(subset)
        sums = []
        for side_a, side_b in splits:
            delta_a = numerical_rank(side_matrices[side_a][:, subset], tol)
            delta_b = numerical_rank(side_matrices[side_b][:, subset], tol)
            if delta_a + delta_b > size + 1:
                return None  # eliminated
            sums.append(SplitSums(side_a, side_b, delta_a, delta_b))
        return Witness(subset, tuple(sums))

    witnesses: list[Witness] = []
    examined = 0
    if fail_fast:
        for size in range(2, n + 1):
            for subset in itertools.combinations(range(n), size):
                examined += 1
                w = survives(subset)
                if w is not None:
                    return Certificate(
                        "Inconclusive", (w,), strategy, tol, examined, n
                    )
    else:
        subsets = [
            subset
            for size in range(2, n + 1)
            for subset in itertools.combinations(range(n), size)
        ]
        examined = len(subsets)
        for w in map_ordered(survives, subsets):
            if w is not None:
                witnesses.append(w)

    status = "Unique" if not witnesses else "Inconclusive"
    return Certificate(status, tuple(witnesses), strategy, tol, examined, n)


def certify_unique_ensemble(
    ens: OperatorFamily,
    strategy: str | None = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    max_members: int = DEFAULT_ENUMERATION_CAP,
    fail_fast: bool = False,
) -> Certificate:
    """Uniqueness certificate for a product ensemble of (unnormalized) kets.

    Identical subset logic, applied to the spans of the local kets.  Every
    factor must be a single-column matrix.
    """
    for p in range(ens.n_parties):
        if ens.spec.d_in(p) != 1:
            raise UsageError(
                f"ensemble certification requires ket members; party {p} has "
                f"d_in = {ens.spec.d_in(p)}"
            )
    return certify_unique(ens, strategy, tol, max_members, fail_fast)


@dataclass(frozen=True)
class CompletenessReport:
    """Trace-preservation residual plus the local-positive-span condition.

    ``residual`` is ||sum_j K_j^dag K_j - I||_F.  ``pair_sums`` maps each
    party pair to delta_alpha + delta_beta where delta_alpha is the span
    dimension of the positive local parts {K_j^(alpha)dag K_j^(alpha)};
    any complete product family must keep every pair sum at or below N + 1,
    so a violated pair rules out completeness (it can never prove it).
    """

    is_complete: bool
    residual: float
    necessary_condition_holds: bool
    pair_sums: dict[tuple[int, int], int]
    local_positive_spans: tuple[int, ...]
    n_members: int

    def to_dict(self) -> dict:
        return {
            "is_complete": self.is_complete,
            "residual": self.residual,
            "necessary_condition_holds": self.necessary_condition_holds,
            "pair_sums": {f"{a},{b}": s for (a, b), s in self.pair_sums.items()},
            "local_positive_spans": list(self.local_positive_spans),
            "n_members": self.n_members,
        }


def _positive_parts(fam: OperatorFamily, party: int) -> list[np.ndarray]:
    return [f.conj().T @ f for f in fam.local_factors(party)]


def verify_completeness(
    fam: OperatorFamily,
    tol: float = 1e-10,
    rank_tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> CompletenessReport:
    """Check sum_j K_j^dag K_j = I and the local-positive-span pair bounds."""
    d_in = fam.spec.total_d_in
    gram = np.zeros((d_in, d_in), dtype=np.complex128)
    for k in fam.assembled():
        gram += k.conj().T @ k
    residual = frobenius(gram - np.eye(d_in))
    is_complete = bool(residual <= tol * np.sqrt(d_in))

    spans = tuple(
        span_dimension(_positive_parts(fam, p), rank_tol)
        for p in range(fam.n_parties)
    )
    n = fam.n_members
    pair_sums = {}
    holds = True
    if fam.n_parties >= 2:
        for a, b in party_pairs(fam.n_parties):
            s = spans[a] + spans[b]
            pair_sums[(a, b)] = s
            if s > n + 1:
                holds = False
    return CompletenessReport(is_complete, residual, holds, pair_sums, spans, n)


def completeness_necessary_condition(
    fam: OperatorFamily,
    rank_tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> CompletenessReport:
    """Necessary condition for a product family to be a complete Kraus set.

    Convenience wrapper: the full report, of which
    ``necessary_condition_holds`` and ``pair_sums`` are the relevant fields.
    """
    return verify_completeness(fam, rank_tol=rank_tol)


def pairwise_proportionality_scan(
    fam: OperatorFamily, tol: float = 1e-10
) -> dict[int, list[tuple[int, int]]]:
    """Per party, all unordered member pairs with proportional positive parts.

    A family whose local positives are pairwise non-proportional for some
    party leaves no room for trivially regrouped representations; the scan
    is a cheap diagnostic to run before the heavier certificate machinery.
    """
    out: dict[int, list[tuple[int, int]]] = {}
    for p in range(fam.n_parties):
        positives = _positive_parts(fam, p)
        pairs = []
        for i, j in itertools.combinations(range(fam.n_members), 2):
            if proportional(positives[i], positives[j], tol) is not None:
                pairs.append((i, j))
        out[p] = pairs
    return out
