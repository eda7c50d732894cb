"""Elimination-order distance: how many ballots must change to realize an order.

An elimination sequence pi is a suffix of a full elimination order; the last
entry is the prospective winner.  Ballots are reduced to types: the chain of
a ballot is its ranking restricted to set(pi) and filtered so positions in pi
strictly increase.  Two ballots with the same chain contribute identically to
every tally a count over set(pi) can produce, and any chain is itself a valid
ranking, so the adversary optimizes over type counts rather than individual
ballots.  Type t is encoded as the bitmask of pi-positions it contains, which
makes the full type space (all strictly increasing chains, empty included)
exactly the 2^|pi| masks.

The model asks for new type counts y_t minimizing the ballots removed from
their original type, subject to conservation of the ballot total and, for
each round of the suffix, the eliminated candidate holding a minimal tally
(non-strict: ties resolve in the adversary's favor).  For a partial suffix
the candidates outside pi are treated as already eliminated, so the optimum
is a lower bound on the distance of every completion.  The solver works on an
equivalent substitution y_t = u_t + e_t with u_t <= n_t the ballots kept and
e_t the additions; integral (u, e) and integral y are cost-preserving images
of each other, so values and witnesses match the y/d formulation exactly.

Exact rational arithmetic throughout; lower bounds are ceilings of LP optima
and exact distances come from branch and bound on the same model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import simplex
from .ballots import Ballot, Profile
from .simplex import SolverError
from .tabulate import CountResult, last_round_margin, tally


class DistanceError(ValueError):
    """The elimination sequence is unusable for the requested operation."""


@dataclass(frozen=True)
class EliminationSequence:
    """A suffix of an elimination order, earliest elimination first.

    complete means the order covers every candidate of the profile it was
    built against, so the final entry wins the manipulated count.
    """

    order: tuple[str, ...]
    complete: bool

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if not self.order:
            raise DistanceError("empty elimination sequence")
        if len(set(self.order)) != len(self.order):
            raise DistanceError(f"repeated candidate in sequence {self.order!r}")

    @staticmethod
    def for_profile(order, profile: Profile) -> "EliminationSequence":
        order = tuple(order)
        ids = set(profile.candidate_ids)
        for c in order:
            if c not in ids:
                raise DistanceError(f"sequence names unknown candidate {c!r}")
        return EliminationSequence(order, complete=len(order) == len(ids))

    @property
    def positions(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.order)}


def project_type(ballot: Ballot, sequence: EliminationSequence) -> tuple[str, ...]:
    """The ballot's chain: suffix candidates in order of appearance, keeping a
    candidate only when its sequence position strictly exceeds the last kept one."""
    pos = sequence.positions
    chain: list[str] = []
    last = -1
    for c in ballot.ranking:
        p = pos.get(c)
        if p is not None and p > last:
            chain.append(c)
            last = p
    return tuple(chain)


def _mask_of(ranking: tuple[str, ...], pos: dict[str, int]) -> int:
    mask = 0
    last = -1
    for c in ranking:
        p = pos.get(c)
        if p is not None and p > last:
            mask |= 1 << p
            last = p
    return mask


@dataclass(frozen=True)
class DistanceModel:
    """Type counts and per-round credits for one elimination sequence.

    counts[mask] is the number of profile ballots whose chain is the type
    encoded by mask; credits[r][mask] is the position (index into the order)
    the type counts toward in round r, or -1 once exhausted.
    """

    sequence: EliminationSequence
    counts: tuple[int, ...]
    credits: tuple[tuple[int, ...], ...]
    total: int

    @property
    def rounds(self) -> int:
        return len(self.sequence.order) - 1

    def chain(self, mask: int) -> tuple[str, ...]:
        order = self.sequence.order
        return tuple(order[i] for i in range(len(order)) if mask >> i & 1)


def build_model(profile: Profile, sequence: EliminationSequence) -> DistanceModel:
    order = sequence.order
    k = len(order)
    pos = sequence.positions
    counts = [0] * (1 << k)
    for ballot in profile.ballots:
        counts[_mask_of(ballot.ranking, pos)] += ballot.count
    credits = []
    for r in range(k - 1):
        row = []
        for mask in range(1 << k):
            rest = mask >> r
            row.append(-1 if rest == 0 else r + (rest & -rest).bit_length() - 1)
        credits.append(tuple(row))
    return DistanceModel(sequence, tuple(counts), tuple(credits), profile.total)


def _assemble(model: DistanceModel):
    """Rows/bounds for the solver in the u/e substitution described above.

    Variable layout: one u per type with ballots on it, then one e per type
    whose chain contains the final (position k-1) candidate.  Additions on
    other chains are dominated: appending the final candidate to a chain only
    adds credits to a position that is never eliminated in the modeled
    rounds, so it weakens no constraint, and the final candidate's singleton
    chain covers what the empty chain would.  Objective sum(-u) so that
    distance = total + optimum.
    """
    ntypes = len(model.counts)
    k = len(model.sequence.order)
    top = 1 << (k - 1)
    u_masks = [m for m in range(ntypes) if model.counts[m]]
    e_masks = [m for m in range(ntypes) if m & top]
    u_index = {m: i for i, m in enumerate(u_masks)}
    e_index = {m: len(u_masks) + i for i, m in enumerate(e_masks)}
    ncols = len(u_masks) + len(e_masks)

    def columns(mask: int):
        cols = []
        if mask in u_index:
            cols.append(u_index[mask])
        if mask in e_index:
            cols.append(e_index[mask])
        return cols

    objective = [-1] * len(u_masks) + [0] * len(e_masks)
    bounds = [(0, model.counts[m]) for m in u_masks] + [(0, None)] * len(e_masks)

    rows = [[1] * ncols]
    senses = ["="]
    rhs = [model.total]
    for r in range(k - 1):
        credit = model.credits[r]
        by_pos: dict[int, list[int]] = {}
        for mask in range(ntypes):
            by_pos.setdefault(credit[mask], []).append(mask)
        losers = by_pos.get(r, [])
        for j in range(r + 1, k):
            row = [0] * ncols
            for mask in losers:
                for col in columns(mask):
                    row[col] = 1
            for mask in by_pos.get(j, []):
                for col in columns(mask):
                    row[col] = -1
            rows.append(row)
            senses.append("<=")
            rhs.append(0)
    return objective, rows, senses, rhs, bounds, u_masks, e_masks


def lower_bound(profile: Profile, sequence: EliminationSequence) -> int:
    """Ceiling of the LP relaxation; admissible for every completion of the suffix."""
    if len(sequence.order) < 2:
        return 0
    model = build_model(profile, sequence)
    objective, rows, senses, rhs, bounds, _, _ = _assemble(model)
    res = simplex.solve_lp(objective, rows, senses, rhs, bounds)
    if res.status != simplex.OPTIMAL:
        raise SolverError(f"distance relaxation reported {res.status}")
    return math.ceil(model.total + res.value)


@dataclass(frozen=True)
class Manipulation:
    """A per-type witness: remove `removals` ballots by chain, add `additions`.

    Addition chains are themselves rankings, so applying the manipulation is a
    plain ballot rewrite of sum-of-removals ballots.
    """

    sequence: EliminationSequence
    removals: tuple[tuple[tuple[str, ...], int], ...]
    additions: tuple[tuple[tuple[str, ...], int], ...]

    @property
    def size(self) -> int:
        return sum(n for _, n in self.removals)


def exact_distance(
    profile: Profile, sequence: EliminationSequence, cutoff: int | None = None
) -> tuple[int, Manipulation] | None:
    """Minimum ballots to rewrite so the complete order is adversarially valid.

    With a cutoff, returns None as soon as the distance provably reaches it;
    otherwise the exact value and a witness.
    """
    if not sequence.complete or len(sequence.order) != len(profile.candidate_ids):
        raise DistanceError("exact distance requires a complete elimination order")
    model = build_model(profile, sequence)
    objective, rows, senses, rhs, bounds, u_masks, e_masks = _assemble(model)
    winner_col = len(u_masks) + e_masks.index(1 << (len(sequence.order) - 1))

    def round_down(x):
        # Floors satisfy the bounds and can only loosen tallies on the
        # removal side; the winner's singleton chain absorbs the conservation
        # shortfall.  Feasibility is still checked by the solver.
        guess = [math.floor(v) for v in x]
        guess[winner_col] += model.total - sum(guess)
        return guess

    res = simplex.solve_ip(
        objective,
        rows,
        senses,
        rhs,
        bounds,
        integral_objective=True,
        cutoff=None if cutoff is None else cutoff - model.total,
        hint=round_down,
    )
    if res.status == simplex.CUTOFF:
        return None
    if res.status != simplex.OPTIMAL:
        raise SolverError(f"distance program reported {res.status}")
    value = model.total + res.value
    assert value.denominator == 1
    nu = len(u_masks)
    removals = []
    additions = []
    for i, mask in enumerate(u_masks):
        kept = res.x[i]
        if kept < model.counts[mask]:
            removals.append((model.chain(mask), int(model.counts[mask] - kept)))
    for i, mask in enumerate(e_masks):
        added = res.x[nu + i]
        if added:
            additions.append((model.chain(mask), int(added)))
    manip = Manipulation(sequence, tuple(sorted(removals)), tuple(sorted(additions)))
    return int(value), manip


def apply_manipulation(profile: Profile, manipulation: Manipulation) -> Profile:
    """Rewrite ballots per the witness and return the manipulated profile."""
    remaining = {chain: n for chain, n in manipulation.removals}
    new_counts: dict[tuple[str, ...], int] = {}
    for ballot in profile.ballots:
        chain = project_type(ballot, manipulation.sequence)
        count = ballot.count
        need = remaining.get(chain, 0)
        if need:
            taken = min(need, count)
            remaining[chain] = need - taken
            count -= taken
        if count:
            new_counts[ballot.ranking] = new_counts.get(ballot.ranking, 0) + count
    leftover = {c: n for c, n in remaining.items() if n}
    if leftover:
        raise DistanceError(f"witness removes more ballots than exist: {leftover}")
    for chain, n in manipulation.additions:
        new_counts[chain] = new_counts.get(chain, 0) + n
    ballots = tuple(Ballot(r, n) for r, n in new_counts.items())
    return Profile(profile.candidates, ballots)


def swap_final_witness(
    profile: Profile, count: CountResult
) -> tuple[int, Manipulation]:
    """Witness realizing the realized order with its last two entries swapped.

    Rewrites last-round-margin many ballots from the winner's final-round
    pile, preferring ballots that reach the winner latest, replacing the
    winner with the runner-up in each chain.  Earlier rounds stay valid: a
    rewritten ballot moves tallies from winner to runner-up only in rounds
    where it credited the winner, the runner-up's original tallies never
    exceed its final one, and tallies only grow between rounds, which caps
    the winner's pile loss in any earlier round below its slack there.  The
    result always costs exactly the last-round margin, so the construction is
    verified by re-tallying rather than solved for.
    """
    realized = count.elimination_order
    if len(realized) < 2:
        raise DistanceError("need at least two candidates to swap")
    order = realized[:-2] + (realized[-1], realized[-2])
    sequence = EliminationSequence(order, complete=True)
    k = len(order)
    winner_bit = 1 << (k - 2)
    model = build_model(profile, sequence)
    need = last_round_margin(count)

    piles = [m for m in range(len(model.counts)) if m & winner_bit and model.counts[m]]
    piles.sort(key=lambda m: (m & (winner_bit - 1)).bit_length(), reverse=True)
    removals = []
    additions: dict[int, int] = {}
    left = need
    for mask in piles:
        if not left:
            break
        take = min(left, model.counts[mask])
        removals.append((model.chain(mask), take))
        new_mask = (mask & ~winner_bit) | (1 << (k - 1))
        additions[new_mask] = additions.get(new_mask, 0) + take
        left -= take
    if left:
        raise SolverError("final-round pile smaller than the last-round margin")
    manip = Manipulation(
        sequence,
        tuple(sorted(removals)),
        tuple(sorted((model.chain(m), n) for m, n in additions.items())),
    )

    rewritten = apply_manipulation(profile, manip)
    for r in range(k - 1):
        standing = order[r:]
        votes = tally(rewritten, standing).votes
        if votes[order[r]] != min(votes[c] for c in standing):
            raise SolverError(f"swap witness fails round {r + 1} of {order}")
    return need, manip


def model_lp_text(model: DistanceModel) -> str:
    """Human-readable dump of the y/d form of the model (debugging aid)."""

    def y(mask: int) -> str:
        chain = model.chain(mask)
        return "y[" + (">".join(chain) if chain else "-") + "]"

    def d(mask: int) -> str:
        return "d[" + ">".join(model.chain(mask)) + "]"

    order = model.sequence.order
    ntypes = len(model.counts)
    supported = [m for m in range(ntypes) if model.counts[m]]
    lines = [
        "# elimination distance model",
        "# order: " + " > ".join(order)
        + (" (complete)" if model.sequence.complete else " (suffix)"),
        "minimize: " + (" + ".join(d(m) for m in supported) or "0"),
        "subject to:",
        "  conserve: "
        + " + ".join(y(m) for m in range(ntypes))
        + f" = {model.total}",
    ]
    for r in range(len(order) - 1):
        credit = model.credits[r]
        left = [y(m) for m in range(ntypes) if credit[m] == r]
        for j in range(r + 1, len(order)):
            right = [y(m) for m in range(ntypes) if credit[m] == j]
            lines.append(
                f"  round {r + 1} ({order[r]} vs {order[j]}): "
                + (" + ".join(left) or "0")
                + " <= "
                + (" + ".join(right) or "0")
            )
    for m in supported:
        lines.append(f"  link {'>'.join(model.chain(m)) or '-'}: "
                     f"{y(m)} + {d(m)} >= {model.counts[m]}")
    lines.append("bounds: y[*] >= 0, d[*] >= 0")
    return "\n".join(lines) + "\n"
