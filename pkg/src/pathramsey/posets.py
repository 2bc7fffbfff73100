"""Finite posets and the iterated down-set lattice hierarchy.

Everything in this package runs on a tower of posets: the ground level is a
disjoint union of color chains, and each later level is the lattice of all
down-sets of the previous one, ordered by inclusion.  Elements carry stable
integer indices assigned in (rank, lexicographic member list) order, so the
index order of every constructed poset is a linear extension.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_BUDGET = 10 ** 6


class PosetError(ValueError):
    pass


class BudgetError(PosetError):
    """Down-set enumeration would exceed the configured element budget."""


@dataclass(frozen=True)
class ChainSpec:
    """Disjoint color chains; entry i is the length of chain i (= m_i - 1).

    m_i is the forbidden monochromatic path length in color i.  The diagonal
    case uses the same m for every color.
    """

    lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(int(n) for n in self.lengths)
        if len(lengths) < 2:
            raise PosetError("need at least two colors (t >= 2)")
        if any(n < 1 for n in lengths):
            raise PosetError("every chain needs length >= 1 (every m_i >= 2)")
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def diagonal(cls, m: int, t: int) -> "ChainSpec":
        if m < 2:
            raise PosetError("diagonal spec needs m >= 2")
        if t < 2:
            raise PosetError("diagonal spec needs t >= 2")
        return cls((m - 1,) * t)

    @classmethod
    def from_m(cls, m_values) -> "ChainSpec":
        return cls(tuple(m - 1 for m in m_values))

    @property
    def t(self) -> int:
        return len(self.lengths)

    @property
    def m_values(self) -> tuple[int, ...]:
        return tuple(n + 1 for n in self.lengths)


def _bits(mask: int):
    """Indices of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Poset:
    """Immutable finite poset with indexed elements.

    The relation is stored as packed bitset rows: bit j of ``below[i]`` is set
    iff j <= i (so each row is the principal down-set of its element).  Level-1
    posets are chain unions carrying (chain, height) metadata; levels >= 2 are
    down-set lattices whose elements are frozensets of parent indices and whose
    order is set inclusion.
    """

    def __init__(self, level, below, members=None, chain_meta=None, check=True):
        self.level = int(level)
        self.size = len(below)
        self._below = tuple(below)
        self.members = members
        self.chain_meta = chain_meta
        self._full = (1 << self.size) - 1
        if members is not None:
            self._member_masks = tuple(
                sum(1 << j for j in fs) for fs in members
            )
            self._mask_index = {m: i for i, m in enumerate(self._member_masks)}
        else:
            self._member_masks = None
            self._mask_index = None
        self._rank_cache = None
        self._antichain_cache = None
        if check:
            self._validate()

    # -- construction sanity ------------------------------------------------

    def _validate(self):
        below = self._below
        for i in range(self.size):
            if not (below[i] >> i) & 1:
                raise PosetError(f"relation not reflexive at {i}")
        for i in range(self.size):
            for j in _bits(below[i]):
                if j != i and (below[j] >> i) & 1:
                    raise PosetError(f"relation not antisymmetric at {i},{j}")
                if below[j] & ~below[i]:
                    raise PosetError(f"relation not transitive at {j} <= {i}")

    # -- basic queries -------------------------------------------------------

    def leq(self, i: int, j: int) -> bool:
        return bool((self._below[j] >> i) & 1)

    def below_mask(self, i: int) -> int:
        return self._below[i]

    def rank(self, i: int) -> int:
        if self.level == 1:
            return self.chain_meta[i][1] - 1
        return len(self.members[i])

    def ranks(self):
        if self._rank_cache is None:
            self._rank_cache = tuple(self.rank(i) for i in range(self.size))
        return self._rank_cache

    def top(self) -> int:
        maxima = self.maximal_of(range(self.size))
        if len(maxima) != 1:
            raise PosetError("poset has no unique maximum")
        return maxima[0]

    def bottom(self) -> int:
        minima = [i for i in range(self.size) if self._below[i] == (1 << i)]
        if len(minima) != 1:
            raise PosetError("poset has no unique minimum")
        return minima[0]

    def bottom_chain(self, r: int) -> int:
        """The unique element of rank r, defined for 0 <= r <= level - 2."""
        if self.level < 2:
            raise PosetError("bottom-chain accessor needs level >= 2")
        if not 0 <= r <= self.level - 2:
            raise PosetError(f"rank {r} outside bottom chain 0..{self.level - 2}")
        hits = [i for i, rk in enumerate(self.ranks()) if rk == r]
        if len(hits) != 1:
            raise PosetError(f"rank {r} is not a singleton rank")
        return hits[0]

    def linear_extension(self) -> tuple[int, ...]:
        """Element indices in a linear extension (by construction: identity)."""
        order = sorted(range(self.size), key=lambda i: (self.rank(i), i))
        return tuple(order)

    # -- down-set operations --------------------------------------------------

    def downset_closure_mask(self, gens) -> int:
        mask = 0
        for g in gens:
            mask |= self._below[g]
        return mask

    def downset_of(self, gens) -> frozenset:
        """All elements below some generator (the generated down-set)."""
        return frozenset(_bits(self.downset_closure_mask(gens)))

    def maximal_of(self, subset) -> tuple[int, ...]:
        """Maximal members of a subset, ascending."""
        sub = sorted(set(subset))
        out = []
        for x in sub:
            if not any(y != x and self.leq(x, y) for y in sub):
                out.append(x)
        return tuple(out)

    def index_of_downset(self, members_or_mask) -> int:
        """Index of the element equal to the given down-set (level >= 2)."""
        if self._mask_index is None:
            raise PosetError("element lookup needs a down-set lattice")
        mask = (
            members_or_mask
            if isinstance(members_or_mask, int)
            else sum(1 << j for j in members_or_mask)
        )
        try:
            return self._mask_index[mask]
        except KeyError:
            raise PosetError("set is not a down-set of the parent poset") from None

    # -- width ----------------------------------------------------------------

    def max_antichain(self) -> tuple[int, ...]:
        if self._antichain_cache is None:
            self._antichain_cache = max_antichain(self)
        return self._antichain_cache

    def width(self) -> int:
        return len(self.max_antichain())

    # -- export ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        elems = []
        for i in range(self.size):
            rec = {"index": i, "rank": self.rank(i)}
            if self.members is not None:
                rec["members"] = sorted(self.members[i])
            else:
                rec["members"] = []
                rec["chain"], rec["height"] = self.chain_meta[i]
            elems.append(rec)
        return {"level": self.level, "size": self.size, "elements": elems}

    def __repr__(self):
        return f"Poset(level={self.level}, size={self.size})"


def build_q1(spec: ChainSpec) -> Poset:
    """Ground poset: t disjoint chains, chain i of length m_i - 1."""
    below = []
    meta = []
    idx = 0
    for chain, length in enumerate(spec.lengths):
        for height in range(1, length + 1):
            base = idx - (height - 1)
            row = 0
            for j in range(base, idx + 1):
                row |= 1 << j
            below.append(row)
            meta.append((chain, height))
            idx += 1
    return Poset(1, below, chain_meta=tuple(meta))


def q1_element(spec_or_poset, chain: int, height: int) -> int:
    """Index of the height-h element on the given chain of a level-1 poset."""
    p = spec_or_poset
    if isinstance(p, Poset):
        for i, (c, hgt) in enumerate(p.chain_meta):
            if c == chain and hgt == height:
                return i
        raise PosetError(f"no chain element ({chain}, {height})")
    offset = sum(p.lengths[:chain])
    if not 1 <= height <= p.lengths[chain]:
        raise PosetError(f"no chain element ({chain}, {height})")
    return offset + height - 1


def downset_lattice(p: Poset, budget: int = DEFAULT_BUDGET) -> Poset:
    """Poset of all down-sets of p ordered by inclusion (one level up).

    Down-sets are enumerated incrementally along a linear extension of p
    (each element either joins a down-set containing its strict down-set or
    stays out), which is output-linear and lets the budget guard fire before
    anything blows up.
    """
    order = p.linear_extension()
    masks = [0]
    for e in order:
        need = p.below_mask(e) & ~(1 << e)
        bit = 1 << e
        fresh = [m | bit for m in masks if m & need == need]
        masks.extend(fresh)
        if len(masks) > budget:
            raise BudgetError(
                f"down-set count exceeds budget {budget} at level {p.level + 1}"
            )
    masks.sort(key=lambda m: (m.bit_count(), _bits(m)))
    members = tuple(frozenset(_bits(m)) for m in masks)
    below = []
    for mi in masks:
        row = 0
        for j, mj in enumerate(masks):
            if mj & ~mi == 0:
                row |= 1 << j
        below.append(row)
    return Poset(p.level + 1, below, members=members, check=False)


def downset_generated(p: Poset, gens) -> frozenset:
    """Module-level alias for the generated down-set { x : x <= g for some g }."""
    return p.downset_of(gens)


def q_hierarchy(spec: ChainSpec, top_level: int, budget: int = DEFAULT_BUDGET):
    """[Q_1, ..., Q_top_level] for the given chain spec."""
    if top_level < 1:
        raise PosetError("hierarchy needs at least one level")
    out = [build_q1(spec)]
    while len(out) < top_level:
        out.append(downset_lattice(out[-1], budget=budget))
    return out


# -- exact width via minimum chain cover --------------------------------------


def _matching_size(p: Poset, elems) -> int:
    """Maximum matching of the strict-order bipartite graph on elems."""
    order = list(elems)
    pos = {e: i for i, e in enumerate(order)}
    adj = []
    for u in order:
        adj.append([pos[v] for v in order if v != u and p.leq(u, v)])
    match_right = [-1] * len(order)

    def augment(u, seen):
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    size = 0
    for u in range(len(order)):
        if adj[u] and augment(u, [False] * len(order)):
            size += 1
    return size


def width_of(p: Poset, elems) -> int:
    """Width of the induced subposet on elems (Dilworth via matching)."""
    elems = list(elems)
    return len(elems) - _matching_size(p, elems)


def max_antichain(p: Poset) -> tuple[int, ...]:
    """Lexicographically least maximum antichain, by element index.

    Greedy over indices with an exact feasibility oracle: index i joins iff
    some maximum antichain extends the current prefix through i.
    """
    total = width_of(p, range(p.size))
    chosen = []
    cands = list(range(p.size))
    for i in range(p.size):
        if i not in cands:
            continue
        rest = [x for x in cands if x != i and not p.leq(x, i) and not p.leq(i, x)]
        if len(chosen) + 1 + width_of(p, rest) == total:
            chosen.append(i)
            cands = rest
    return tuple(chosen)


def downset_to_heights(p: Poset, parent: Poset, index: int) -> tuple[int, ...]:
    """Vector view of a level-2 element: per-chain maximum height covered."""
    if p.level != 2 or parent.level != 1:
        raise PosetError("vector view is defined for level-2 elements")
    t = max(c for c, _ in parent.chain_meta) + 1
    heights = [0] * t
    for j in p.members[index]:
        chain, height = parent.chain_meta[j]
        heights[chain] = max(heights[chain], height)
    return tuple(heights)


def heights_to_downset(p: Poset, parent: Poset, heights) -> int:
    """Inverse of the vector view: level-2 element index for a height vector."""
    gens = []
    for chain, h in enumerate(heights):
        if h > 0:
            gens.append(q1_element(parent, chain, h))
    return p.index_of_downset(parent.downset_of(gens))
