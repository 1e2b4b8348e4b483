"""
Road-colored Markov chains and synchronizing words.

A coloring ``γ: S × C → S`` together with a color distribution ``ν`` drives every
state by the same random color. Two copies driven this way form the graph
product, a coupling of the chain with itself, and they merge once the color
word read so far synchronizes the automaton.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatch, HorizonTooLarge, InvalidWeights, UnknownColor
from .objects import KrausChannel
from .settings import LIMITS, TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RoadColoring:
    states: Tuple[str, ...]
    colors: Tuple[str, ...]
    gamma: NDArray[np.int64]  # gamma[c, s] = γ(s, c)
    nu: NDArray[np.float64]

    @classmethod
    def create(
        cls,
        states: Sequence[str],
        colors: Sequence[str],
        gamma: Mapping[str, Sequence[int | str]],
        nu: Mapping[str, float],
    ) -> RoadColoring:
        """
        Build a coloring from per-color target lists.

        Targets may be state labels or indices into ``states``.
        """

        states = tuple(str(s) for s in states)
        colors = tuple(str(c) for c in colors)
        if not states or not colors:
            raise DimensionMismatch("a coloring needs at least one state and one color")
        if len(set(states)) != len(states) or len(set(colors)) != len(colors):
            raise DimensionMismatch("state and color labels must be unique")
        index = {s: i for i, s in enumerate(states)}

        table = np.zeros((len(colors), len(states)), dtype=np.int64)
        for ci, color in enumerate(colors):
            if color not in gamma:
                raise UnknownColor(f"gamma has no row for color {color!r}")
            targets = list(gamma[color])
            if len(targets) != len(states):
                raise DimensionMismatch(f"color {color!r} has {len(targets)} targets, expected {len(states)}")
            for si, target in enumerate(targets):
                if isinstance(target, str):
                    if target not in index:
                        raise DimensionMismatch(f"unknown target state {target!r}")
                    table[ci, si] = index[target]
                else:
                    if not 0 <= int(target) < len(states):
                        raise DimensionMismatch(f"target index {target} out of range")
                    table[ci, si] = int(target)

        extra = set(gamma) - set(colors)
        if extra:
            raise UnknownColor(f"gamma names undeclared colors {sorted(extra)}")
        missing = [c for c in colors if c not in nu]
        if missing or set(nu) - set(colors):
            raise InvalidWeights(f"nu must give exactly the declared colors; missing {missing}")
        weights = np.array([float(nu[c]) for c in colors])
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > TOL.probability:
            raise InvalidWeights(f"nu {weights.tolist()} must be nonnegative and sum to 1")
        return cls(states, colors, table, weights)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_colors(self) -> int:
        return len(self.colors)

    def color_index(self, color: str) -> int:
        try:
            return self.colors.index(color)
        except ValueError:
            raise UnknownColor(f"color {color!r} is not one of {list(self.colors)}") from None

    def weight(self, color: str) -> float:
        return float(self.nu[self.color_index(color)])


def stochastic_matrix(rc: RoadColoring) -> NDArray[np.float64]:
    """``T[s, s′] = Σ_{c: γ(s,c) = s′} ν(c)``."""

    t = np.zeros((rc.n_states, rc.n_states))
    rows = np.arange(rc.n_states)
    for ci in range(rc.n_colors):
        np.add.at(t, (rows, rc.gamma[ci]), rc.nu[ci])
    return t


def graph_product(rc: RoadColoring) -> RoadColoring:
    """Two copies of ``rc`` read the same color; pair ``(s, s′)`` has index ``s·|S| + s′``."""

    n = rc.n_states
    pairs = tuple(f"({a},{b})" for a in rc.states for b in rc.states)
    gamma = rc.gamma[:, :, None] * n + rc.gamma[:, None, :]
    return RoadColoring(pairs, rc.colors, gamma.reshape(rc.n_colors, n * n), rc.nu.copy())


def run_word(rc: RoadColoring, word: Sequence[str]) -> NDArray[np.int64]:
    """End state of the word from every start state."""

    current = np.arange(rc.n_states)
    for color in word:
        current = rc.gamma[rc.color_index(color)][current]
    return current


def is_synchronizing_word(rc: RoadColoring, word: Sequence[str]) -> bool:
    ends = run_word(rc, word)
    return bool(np.all(ends == ends[0]))


@dataclass(frozen=True)
class SubsetAutomaton:
    """Subsets of ``S`` reachable from ``S`` itself, as bitmasks in discovery order."""

    subsets: Tuple[int, ...]
    transfer: NDArray[np.float64]  # row-stochastic over subsets

    @property
    def singleton(self) -> NDArray[np.bool_]:
        return np.array([bin(m).count("1") == 1 for m in self.subsets])


def _image(rc: RoadColoring, mask: int, ci: int) -> int:
    out = 0
    for s in range(rc.n_states):
        if mask >> s & 1:
            out |= 1 << int(rc.gamma[ci, s])
    return out


def subset_automaton(rc: RoadColoring) -> SubsetAutomaton:
    full = (1 << rc.n_states) - 1
    order: Dict[int, int] = {full: 0}
    edges: List[Tuple[int, int, float]] = []
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for ci in range(rc.n_colors):
            image = _image(rc, mask, ci)
            if image not in order:
                order[image] = len(order)
                queue.append(image)
            edges.append((order[mask], order[image], float(rc.nu[ci])))

    transfer = np.zeros((len(order), len(order)))
    for src, dst, w in edges:
        transfer[src, dst] += w
    logger.debug("subset automaton: %d reachable subsets", len(order))
    return SubsetAutomaton(tuple(order), transfer)


def nonsync_curve(rc: RoadColoring, n_max: int) -> NDArray[np.float64]:
    """Probability that a ν-random word of length ``n`` does not synchronize, ``n = 0 … n_max``."""

    automaton = subset_automaton(rc)
    live = ~automaton.singleton
    dist = np.zeros(len(automaton.subsets))
    dist[0] = 1.0
    curve = np.empty(n_max + 1)
    for n in range(n_max + 1):
        curve[n] = dist[live].sum()
        dist = dist @ automaton.transfer
    return curve


def nonsync_probability(rc: RoadColoring, n: int) -> float:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return float(nonsync_curve(rc, n)[n])


def _check_enumeration(rc: RoadColoring, n: int) -> None:
    words = rc.n_colors**n
    if words > LIMITS.enumeration:
        raise HorizonTooLarge(f"|C|ⁿ = {words} exceeds {LIMITS.enumeration}")


def nonsync_enumeration_oracle(rc: RoadColoring, n: int) -> float:
    """Sum the ν-weights of every non-synchronizing word of length ``n`` by brute force."""

    _check_enumeration(rc, n)

    ends = np.arange(rc.n_states, dtype=np.int16)[None, :]
    weights = np.ones(1)
    for _ in range(n):
        ends = rc.gamma[:, ends].astype(np.int16).reshape(-1, rc.n_states)
        weights = (rc.nu[:, None] * weights[None, :]).reshape(-1)
    unsynced = np.any(ends != ends[:, :1], axis=1)
    return float(weights[unsynced].sum())


def synchronizable(rc: RoadColoring) -> bool:
    """Whether some word synchronizes ``rc`` (a singleton is reachable from ``S``)."""

    return bool(np.any(subset_automaton(rc).singleton))


def sync_rate(rc: RoadColoring) -> float:
    """Spectral radius of the subset transfer matrix on non-singleton subsets."""

    automaton = subset_automaton(rc)
    live = ~automaton.singleton
    if not np.any(live):
        return 0.0
    block = automaton.transfer[np.ix_(live, live)]
    return float(np.max(np.abs(np.linalg.eigvals(block))))


class AlternatingSum(NamedTuple):
    binomial_sum: float
    closed_form: float


def alternating_sum_bound(
    n: int, red: float = 1 / 3, idle: float = 1 / 2, blue: float = 1 / 6
) -> AlternatingSum:
    """
    Non-synchronizing probability of a chain whose only surviving words are
    ``idle``-padded alternations of ``red`` and ``blue``.

    With ``k`` non-idle letters there are two alternating words: weight
    ``2(red·blue)^{k/2}`` for even ``k``, ``(red+blue)(red·blue)^{(k-1)/2}`` for odd ``k``.
    The closed form is ``2(idle + √(red·blue))ⁿ``.
    """

    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    product = red * blue
    total = 0.0
    for k in range(n + 1):
        if k == 0:
            ck = 1.0
        elif k % 2 == 0:
            ck = 2.0 * product ** (k // 2)
        else:
            ck = (red + blue) * product ** ((k - 1) // 2)
        total += math.comb(n, k) * idle ** (n - k) * ck
    return AlternatingSum(total, 2.0 * (idle + math.sqrt(product)) ** n)


def classical_mixing_bound(rc: RoadColoring, n: int) -> float:
    """``2 · max_{(s,s′)} P((s,s′) chain is off the diagonal after n steps)``."""

    size = rc.n_states
    pair = np.linalg.matrix_power(stochastic_matrix(graph_product(rc)), n)
    diagonal = np.arange(size) * size + np.arange(size)
    off = 1.0 - pair[:, diagonal].sum(axis=1)
    return float(2.0 * max(0.0, off.max()))


def worst_case_distance(t: NDArray[np.float64], n: int) -> float:
    """``max_{s,s′} ‖δ_s Tⁿ - δ_{s′} Tⁿ‖₁``."""

    power = np.linalg.matrix_power(np.asarray(t, dtype=float), n)
    diffs = power[:, None, :] - power[None, :, :]
    return float(np.abs(diffs).sum(axis=2).max())


def deterministic_channel(targets: Sequence[int], d: int | None = None) -> KrausChannel:
    """Heisenberg channel of ``s ↦ targets[s]``: Kraus ``|targets[s]⟩⟨s|``."""

    n = len(targets) if d is None else d
    kraus = []
    for s, t in enumerate(targets):
        k = np.zeros((n, len(targets)), dtype=np.complex128)
        k[int(t), s] = 1.0
        kraus.append(k)
    return KrausChannel(tuple(kraus))


def road_coloring_channel(rc: RoadColoring) -> KrausChannel:
    """``Σ_c ν(c) · deterministic_channel(γ(·, c))``; restricts to the stochastic matrix on diagonals."""

    kraus = []
    for ci in range(rc.n_colors):
        if rc.nu[ci] <= 0:
            continue
        scale = math.sqrt(rc.nu[ci])
        kraus.extend(scale * k for k in deterministic_channel(rc.gamma[ci]).kraus)
    return KrausChannel(tuple(kraus))


@dataclass(frozen=True)
class SyncReport:
    horizon: int
    exact_nonsync: Tuple[float, ...]
    closed_form: Tuple[float, ...]
    mixing_bound: Tuple[float, ...]
    rate: float
    synchronizable: bool
    binomial_sum: Tuple[float, ...] | None = None
    oracle_agreement: bool | None = None

    def rows(self) -> List[Tuple[int, float, float, float, float]]:
        binomial = self.binomial_sum or (math.nan,) * (self.horizon + 1)
        return [
            (n, self.exact_nonsync[n], binomial[n], self.closed_form[n], self.mixing_bound[n])
            for n in range(self.horizon + 1)
        ]


def sync_report(
    rc: RoadColoring,
    n_max: int,
    *,
    alternating: Tuple[float, float, float] | None = None,
    enumerate_max: int = 0,
) -> SyncReport:
    """
    Exact non-synchronizing probabilities with their bounds for ``n = 0 … n_max``.

    ``alternating`` gives ``(red, idle, blue)`` weights for the binomial column.
    Words up to length ``enumerate_max`` are cross-checked by enumeration.
    """

    exact = nonsync_curve(rc, n_max)
    rate = sync_rate(rc)
    closed = tuple(2.0 * rate**n for n in range(n_max + 1))
    bounds = tuple(classical_mixing_bound(rc, n) for n in range(n_max + 1))

    binomial = None
    if alternating is not None:
        red, idle, blue = alternating
        binomial = tuple(alternating_sum_bound(n, red, idle, blue).binomial_sum for n in range(n_max + 1))

    agreement = None
    if enumerate_max > 0:
        horizon = min(enumerate_max, n_max)
        _check_enumeration(rc, horizon)
        agreement = all(
            abs(nonsync_enumeration_oracle(rc, n) - exact[n]) <= TOL.probability for n in range(horizon + 1)
        )
        logger.info("enumeration oracle agrees up to n=%d: %s", horizon, agreement)

    return SyncReport(
        horizon=n_max,
        exact_nonsync=tuple(float(v) for v in exact),
        closed_form=closed,
        mixing_bound=bounds,
        rate=rate,
        synchronizable=synchronizable(rc),
        binomial_sum=binomial,
        oracle_agreement=agreement,
    )
