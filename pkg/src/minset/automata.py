"""Deterministic automata over digit alphabets.

Three machine families cover everything the package needs:

* avoidance machines accepting exactly the digit strings that contain
  no pattern from a given antichain as a subsequence (complements of
  finite unions of shuffle ideals),
* a numeral-validity machine (nonempty, no leading zero),
* residue trackers computing value(w) mod m digit by digit.

Machines compose with ``intersect`` and are classified by
``analyze_residual`` into empty / finite / pumped-family languages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .numerals import Antichain, DomainError, Numeral, _check_base


@dataclass(frozen=True)
class SubwordDfa:
    """Complete DFA: states are 0..n-1, transition[s][d] is total."""

    base: int
    start: int
    transitions: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]
    # optional residue annotation: (modulus, residue of each state)
    residue_modulus: Optional[int] = None
    residues: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        _check_base(self.base)
        n = len(self.transitions)
        if not 0 <= self.start < n:
            raise DomainError("start state out of range")
        for row in self.transitions:
            if len(row) != self.base or any(not 0 <= t < n for t in row):
                raise DomainError("transition table is not total")

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    def step(self, state: int, digit: int) -> int:
        return self.transitions[state][digit]

    def walk(self, digits: Sequence[int]) -> int:
        s = self.start
        for d in digits:
            s = self.transitions[s][d]
        return s

    def accepts_digits(self, digits: Sequence[int]) -> bool:
        return self.walk(digits) in self.accepting

    def dump(self) -> str:
        """Debugging text listing; not a stability contract."""
        lines = [f"base={self.base} states={self.num_states} start={self.start}"]
        for s, row in enumerate(self.transitions):
            mark = "*" if s in self.accepting else " "
            res = ""
            if self.residues is not None:
                res = f" r={self.residues[s]}"
            lines.append(f"{mark}{s}{res}: " +
                         " ".join(f"{d}->{t}" for d, t in enumerate(row)))
        return "\n".join(lines)


def accepts(dfa: SubwordDfa, word) -> bool:
    """Does the machine accept the numeral / digit sequence?"""
    if isinstance(word, Numeral):
        if word.base != dfa.base:
            raise DomainError("numeral base does not match automaton base")
        return dfa.accepts_digits(word.digits)
    return dfa.accepts_digits(tuple(word))


def build_avoidance_dfa(patterns, base: Optional[int] = None) -> SubwordDfa:
    """Machine accepting strings that contain no pattern as a subsequence.

    State = vector of greedy per-pattern match positions (greedy matching
    is optimal for subsequence search, so one position per pattern is a
    faithful canonical form); any completed pattern collapses into a
    single absorbing dead state.
    """
    if isinstance(patterns, Antichain):
        base = patterns.base
        pats = [p.digits for p in patterns]
    else:
        pats = [p.digits if isinstance(p, Numeral) else tuple(p) for p in patterns]
        for p in patterns:
            if isinstance(p, Numeral):
                if base is not None and p.base != base:
                    raise DomainError("pattern base mismatch")
                base = p.base
    if base is None:
        raise DomainError("base required for an empty pattern set")
    _check_base(base)

    start_vec = tuple(0 for _ in pats)
    index = {start_vec: 0}
    rows: list[list[int]] = []
    queue = [start_vec]
    dead: Optional[int] = None

    def state_of(vec):
        nonlocal dead
        if any(vec[i] == len(pats[i]) for i in range(len(pats))):
            if dead is None:
                dead = -1  # placeholder, resolved after BFS
            return "DEAD"
        if vec not in index:
            index[vec] = len(index)
            queue.append(vec)
        return index[vec]

    succ: list[list] = []
    while queue:
        vec = queue.pop(0)
        row = []
        for d in range(base):
            nxt = tuple(v + 1 if v < len(p) and p[v] == d else v
                        for v, p in zip(vec, pats))
            row.append(state_of(nxt))
        succ.append(row)

    n = len(index)
    if dead is not None:
        dead = n
        n += 1
        succ.append(["DEAD"] * base)
    rows = [tuple(dead if t == "DEAD" else t for t in row) for row in succ]
    accepting = frozenset(range(len(index)))  # everything but the dead state
    return SubwordDfa(base, 0, tuple(rows), accepting)


def valid_numeral_dfa(base: int) -> SubwordDfa:
    """Rejects the empty string and strings with a leading zero."""
    _check_base(base)
    # 0 = start, 1 = seen a valid numeral, 2 = dead (led with zero)
    rows = (
        tuple(2 if d == 0 else 1 for d in range(base)),
        tuple(1 for _ in range(base)),
        tuple(2 for _ in range(base)),
    )
    return SubwordDfa(base, 0, rows, frozenset({1}))


def residue_dfa(base: int, modulus: int,
                accepting_residues: Optional[Iterable[int]] = None) -> SubwordDfa:
    """Tracks value(w) mod modulus via s' = (s*base + d) mod modulus.

    With ``accepting_residues`` the machine is a language acceptor;
    without, every state accepts and the residue annotation is the
    payload.
    """
    _check_base(base)
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    rows = tuple(tuple((s * base + d) % modulus for d in range(base))
                 for s in range(modulus))
    if accepting_residues is None:
        accepting = frozenset(range(modulus))
    else:
        accepting = frozenset(r % modulus for r in accepting_residues)
    return SubwordDfa(base, 0 % modulus, rows, accepting,
                      residue_modulus=modulus, residues=tuple(range(modulus)))


def digit_restriction_dfa(base: int, allowed: Iterable[int]) -> SubwordDfa:
    """Accepts strings using only the allowed digits."""
    _check_base(base)
    allowed = set(allowed)
    rows = (
        tuple(0 if d in allowed else 1 for d in range(base)),
        tuple(1 for _ in range(base)),
    )
    return SubwordDfa(base, 0, rows, frozenset({0}))


def accept_all_dfa(base: int) -> SubwordDfa:
    return SubwordDfa(base, 0, (tuple(0 for _ in range(base)),), frozenset({0}))


def intersect(a: SubwordDfa, b: SubwordDfa) -> SubwordDfa:
    """Reachable product construction for L(a) & L(b)."""
    if a.base != b.base:
        raise DomainError("cannot intersect automata over different bases")
    base = a.base
    index = {(a.start, b.start): 0}
    queue = [(a.start, b.start)]
    rows = []
    accepting = set()
    while queue:
        sa, sb = pair = queue.pop(0)
        if sa in a.accepting and sb in b.accepting:
            accepting.add(index[pair])
        row = []
        for d in range(base):
            nxt = (a.transitions[sa][d], b.transitions[sb][d])
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            row.append(index[nxt])
        rows.append(tuple(row))

    modulus = residues = None
    annotated = a if a.residues is not None else (b if b.residues is not None else None)
    if annotated is not None and not (a.residues and b.residues):
        modulus = annotated.residue_modulus
        which = 0 if annotated is a else 1
        residues = tuple(annotated.residues[pair[which]]
                         for pair, _ in sorted(index.items(), key=lambda kv: kv[1]))
    return SubwordDfa(base, 0, tuple(rows), frozenset(accepting),
                      residue_modulus=modulus, residues=residues)


def intersect_all(machines: Sequence[SubwordDfa]) -> SubwordDfa:
    if not machines:
        raise DomainError("nothing to intersect")
    out = machines[0]
    for m in machines[1:]:
        out = intersect(out, m)
    return out


def _valid_product(dfa: SubwordDfa) -> SubwordDfa:
    return intersect(dfa, valid_numeral_dfa(dfa.base))


def _min_accept_distance(dfa: SubwordDfa) -> list[float]:
    """BFS from accepting states over reversed edges."""
    n = dfa.num_states
    rev: list[list[int]] = [[] for _ in range(n)]
    for s, row in enumerate(dfa.transitions):
        for t in row:
            rev[t].append(s)
    dist = [float("inf")] * n
    queue = [s for s in range(n) if s in dfa.accepting]
    for s in queue:
        dist[s] = 0
    while queue:
        t = queue.pop(0)
        for s in rev[t]:
            if dist[s] == float("inf"):
                dist[s] = dist[t] + 1
                queue.append(s)
    return dist


def enumerate_accepted(dfa: SubwordDfa, max_len: int) -> list[Numeral]:
    """All accepted valid numerals of length <= max_len.

    Output is in (length, lexicographic) order, which for valid numerals
    of one base coincides with ascending value.
    """
    if max_len < 1:
        raise DomainError("max_len must be >= 1")
    machine = _valid_product(dfa)
    dist = _min_accept_distance(machine)
    out: list[Numeral] = []
    for length in range(1, max_len + 1):
        stack = [(machine.start, ())]
        # iterative DFS in lex order at fixed length
        def extend(state, prefix):
            if len(prefix) == length:
                if state in machine.accepting:
                    value = 0
                    for d in prefix:
                        value = value * machine.base + d
                    out.append(Numeral(machine.base, prefix, value))
                return
            remaining = length - len(prefix)
            for d in range(machine.base):
                nxt = machine.transitions[state][d]
                if dist[nxt] <= remaining - 1:
                    extend(nxt, prefix + (d,))
        extend(machine.start, ())
    return out


@dataclass(frozen=True)
class FamilyDescriptor:
    """Pumped family u v^l z of accepted numerals, l >= min_reps."""

    base: int
    prefix: tuple[int, ...]
    loop: tuple[int, ...]
    suffix: tuple[int, ...]
    min_reps: int = 0

    def __post_init__(self):
        if not self.loop:
            raise DomainError("family loop must be nonempty")

    def expand(self, reps: int) -> Numeral:
        if reps < self.min_reps:
            raise DomainError(f"reps below min_reps={self.min_reps}")
        digits = self.prefix + self.loop * reps + self.suffix
        value = 0
        for d in digits:
            value = value * self.base + d
        return Numeral(self.base, digits, value)

    def render(self) -> str:
        from .numerals import DIGIT_ALPHABET
        txt = lambda ds: "".join(DIGIT_ALPHABET[d] for d in ds)
        return (f"{txt(self.prefix)}({txt(self.loop)})^l{txt(self.suffix)}"
                f" [l>={self.min_reps}]")


@dataclass(frozen=True)
class ResidualAnalysis:
    """Classification of a residual language: what is left to rule out."""

    tag: str  # empty | finite | families | undecided
    finite_members: tuple[Numeral, ...] = ()
    families: tuple[FamilyDescriptor, ...] = ()
    reason: str = ""

    @property
    def is_empty(self) -> bool:
        return self.tag == "empty"


def _useful_states(dfa: SubwordDfa) -> set[int]:
    """States both reachable from start and co-reachable to accepting."""
    reach = {dfa.start}
    queue = [dfa.start]
    while queue:
        s = queue.pop()
        for t in dfa.transitions[s]:
            if t not in reach:
                reach.add(t)
                queue.append(t)
    dist = _min_accept_distance(dfa)
    return {s for s in reach if dist[s] < float("inf")}


def _strongly_connected(useful: set[int], edges: dict[int, list[tuple[int, int]]]):
    """Tarjan SCCs of the useful subgraph; edges[s] = [(digit, t), ...]."""
    order = {}
    low = {}
    on_stack = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = [0]

    def strongconnect(v):
        work = [(v, 0)]
        while work:
            node, pi = work.pop()
            if pi == 0:
                order[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            succs = [t for _, t in edges[node] if t in useful]
            for i in range(pi, len(succs)):
                w = succs[i]
                if w not in order:
                    work.append((node, i + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                elif w in on_stack:
                    low[node] = min(low[node], order[w])
            if recurse:
                continue
            if low[node] == order[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    for v in useful:
        if v not in order:
            strongconnect(v)
    return sccs


def analyze_residual(dfa: SubwordDfa, family_cap: int = 64) -> ResidualAnalysis:
    """Classify the accepted valid-numeral language of the machine.

    empty    -- no accepting state reachable;
    finite   -- no cycle on any accepting path, exhaustive member list;
    families -- every cycle on accepting paths is a self-contained simple
                loop, so the language is a finite core plus u v^l z families;
    undecided -- richer cycle structure (nested or chained loops) or more
                than family_cap descriptors.
    """
    machine = _valid_product(dfa)
    useful = _useful_states(machine)
    if not any(s in machine.accepting for s in useful):
        return ResidualAnalysis("empty")

    edges = {s: [(d, machine.transitions[s][d]) for d in range(machine.base)]
             for s in useful}
    sccs = _strongly_connected(useful, edges)
    nontrivial = []
    for comp in sccs:
        if len(comp) > 1:
            nontrivial.append(set(comp))
        elif any(t == comp[0] for _, t in edges[comp[0]]):
            nontrivial.append(set(comp))

    if not nontrivial:
        members = enumerate_accepted(machine, max(1, len(useful)))
        return ResidualAnalysis("finite", tuple(members))

    # each nontrivial SCC must be a single simple cycle
    cycles: list[list[tuple[int, int]]] = []  # [(state, digit-to-next), ...]
    for comp in nontrivial:
        internal = {}
        for s in comp:
            ins = [(d, t) for d, t in edges[s] if t in comp]
            if len(ins) != 1:
                return ResidualAnalysis(
                    "undecided",
                    reason="a strongly connected component branches internally")
            internal[s] = ins[0]
        # follow the unique internal successor; must visit every state once
        s0 = next(iter(comp))
        seen = []
        s = s0
        while True:
            d, t = internal[s]
            seen.append((s, d))
            s = t
            if s == s0:
                break
            if len(seen) > len(comp):
                return ResidualAnalysis(
                    "undecided", reason="component is not a single simple cycle")
        if len(seen) != len(comp):
            return ResidualAnalysis(
                "undecided", reason="component is not a single simple cycle")
        cycles.append(seen)

    # no useful path may chain two cycles
    cycle_states = [frozenset(s for s, _ in cyc) for cyc in cycles]
    all_cyclic = set().union(*cycle_states)
    for i, cyc_set in enumerate(cycle_states):
        # BFS downstream of this cycle, skipping its own states
        seen = set()
        queue = [t for s in cyc_set for _, t in edges[s]
                 if t in useful and t not in cyc_set]
        while queue:
            s = queue.pop()
            if s in seen:
                continue
            seen.add(s)
            if s in all_cyclic:
                return ResidualAnalysis(
                    "undecided", reason="accepting paths chain multiple loops")
            queue.extend(t for _, t in edges[s] if t in useful)

    # break all cycles: intra-SCC edges become dead
    dead = machine.num_states
    broken_rows = []
    for s, row in enumerate(machine.transitions):
        if s in all_cyclic:
            comp = next(cs for cs in cycle_states if s in cs)
            broken_rows.append(tuple(dead if t in comp else t for t in row))
        else:
            broken_rows.append(tuple(row))
    broken_rows.append(tuple(dead for _ in range(machine.base)))
    broken = SubwordDfa(machine.base, machine.start, tuple(broken_rows),
                        machine.accepting)
    members = enumerate_accepted(broken, max(1, len(useful)))

    families = _extract_families(machine, broken, cycles, useful)
    if len(families) > family_cap:
        return ResidualAnalysis(
            "undecided", finite_members=tuple(members),
            reason=f"{len(families)} family descriptors exceed cap {family_cap}")
    return ResidualAnalysis("families", tuple(members), tuple(families))


def _extract_families(machine: SubwordDfa, broken: SubwordDfa,
                      cycles: list[list[tuple[int, int]]],
                      useful: set[int]) -> list[FamilyDescriptor]:
    bound = len(useful) + 1
    dist_broken = _min_accept_distance(broken)
    families = []
    seen = set()
    for cyc in cycles:
        states_in_order = [s for s, _ in cyc]
        digits_in_order = [d for _, d in cyc]
        k = len(cyc)
        comp = set(states_in_order)
        for idx, entry in enumerate(states_in_order):
            prefixes = _bounded_words_to(broken, machine.start, entry, bound)
            if not prefixes:
                continue
            loop = tuple(digits_in_order[idx:] + digits_in_order[:idx])
            # suffixes: from entry, optionally part-way around the cycle
            # (never a full extra lap), then out through the acyclic part
            suffixes = []
            for j in range(k):
                part = loop[:j]
                state_j = states_in_order[(idx + j) % k]
                if j == 0:
                    exits = [(state_j, ())]
                else:
                    exits = [(state_j, part)]
                for st, walked in exits:
                    if st in machine.accepting:
                        suffixes.append(walked)
                    tails = _accepted_words_from(broken, st, bound, dist_broken,
                                                 skip_empty=True)
                    suffixes.extend(walked + t for t in tails)
            for u in prefixes:
                for z in suffixes:
                    key = (u, loop, z)
                    if key in seen:
                        continue
                    seen.add(key)
                    fam = FamilyDescriptor(machine.base, u, loop, z, min_reps=0)
                    families.append(fam)
    return families


def _bounded_words_to(dfa: SubwordDfa, source: int, target: int,
                      max_len: int) -> list[tuple[int, ...]]:
    """Digit words from source to target in a cycle-free machine."""
    out = []

    def walk(state, word):
        if state == target:
            out.append(word)
        if len(word) >= max_len:
            return
        for d in range(dfa.base):
            nxt = dfa.transitions[state][d]
            if _can_reach(dfa, nxt, target, max_len - len(word) - 1):
                walk(nxt, word + (d,))

    walk(source, ())
    return out


def _can_reach(dfa: SubwordDfa, source: int, target: int, budget: int) -> bool:
    if budget < 0:
        return False
    seen = {source}
    frontier = {source}
    steps = 0
    while frontier:
        if target in frontier:
            return True
        if steps >= budget:
            return False
        steps += 1
        nxt = set()
        for s in frontier:
            for t in dfa.transitions[s]:
                if t not in seen:
                    seen.add(t)
                    nxt.add(t)
        frontier = nxt
    return False


def _accepted_words_from(dfa: SubwordDfa, source: int, max_len: int,
                         dist, skip_empty: bool = False) -> list[tuple[int, ...]]:
    """Words leading from source to an accepting state (cycle-free machine)."""
    out = []

    def walk(state, word):
        if state in dfa.accepting and (word or not skip_empty):
            out.append(word)
        if len(word) >= max_len:
            return
        for d in range(dfa.base):
            nxt = dfa.transitions[state][d]
            if dist[nxt] <= max_len - len(word) - 1:
                walk(nxt, word + (d,))

    walk(source, ())
    return out
