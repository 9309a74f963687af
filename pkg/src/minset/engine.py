"""Minimal-set computation and completeness verification.

Two computation paths:

* ``minimal_set_bounded`` -- exact M(S) restricted to [1, B] for any
  oracle, by an ascending scan with incremental subsequence-avoidance
  filtering (minimality of s only references members below s).
* ``minimal_set_automatic`` -- exact M(S) for sets whose membership is
  determined by n mod m, via a shrinking-language fixpoint.

``verify_completeness`` mechanizes the proof pattern: build the
avoidance automaton of a candidate antichain, intersect with validity
and necessary conditions, classify the residual language, and rule out
(or discover) every remaining candidate member.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ._kernel import KERNEL, render_digits, scan_segment
from .automata import (FamilyDescriptor, ResidualAnalysis, SubwordDfa,
                       analyze_residual, build_avoidance_dfa, intersect_all,
                       valid_numeral_dfa)
from .numerals import (Antichain, DomainError, Numeral, antichain_from_values,
                       parse_numeral, reduce_to_antichain, to_numeral)
from .oracles import OracleSpec, parse_oracle_spec

# Largest value safely scanned through the int64 kernel path.
_KERNEL_LIMIT = 1 << 62

MODE_BOUNDED = "bounded"
MODE_EXACT_AUTOMATIC = "exact-automatic"
MODE_VERIFIED_COMPLETE = "verified-complete"
MODE_INCOMPLETE = "incomplete"
MODE_UNDECIDED = "undecided"

_OK_MODES = (MODE_BOUNDED, MODE_EXACT_AUTOMATIC, MODE_VERIFIED_COMPLETE)


@dataclass(frozen=True)
class MinimalSetReport:
    """An antichain plus its epistemic status and supporting evidence."""

    spec_text: str
    base: int
    mode: str
    elements: Antichain
    bound: Optional[int] = None
    assumptions: tuple[str, ...] = ()
    witnesses: dict[int, int] = field(default_factory=dict)
    residual: Optional[ResidualAnalysis] = None
    missing: tuple[int, ...] = ()
    excluded: tuple[int, ...] = ()   # residual members confirmed outside S
    reason: str = ""
    timing_ms: float = 0.0
    kernel: str = KERNEL
    config: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.mode in _OK_MODES

    def values(self) -> tuple[int, ...]:
        return self.elements.values()

    def to_dict(self) -> dict:
        doc = {
            "spec": self.spec_text,
            "base": self.base,
            "mode": self.mode,
            "bound": self.bound,
            "elements": [{"digits": str(e), "value": str(e.value)}
                         for e in self.elements],
            "assumptions": list(self.assumptions),
            "witnesses": {str(k): str(v) for k, v in sorted(self.witnesses.items())},
            "timing_ms": round(self.timing_ms, 3),
            "kernel": self.kernel,
            "config": self.config,
        }
        if self.residual is not None:
            doc["residual"] = {
                "tag": self.residual.tag,
                "members": [str(m) for m in self.residual.finite_members],
                "families": [f.render() for f in self.residual.families],
            }
        if self.missing:
            doc["missing"] = [str(v) for v in self.missing]
        if self.excluded:
            doc["excluded"] = [str(v) for v in self.excluded]
        if self.reason:
            doc["reason"] = self.reason
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["digits", "value", "base"])
        for e in self.elements:
            writer.writerow([str(e), str(e.value), self.base])
        return buf.getvalue()

    def render_text(self) -> str:
        lines = [f"set: {self.spec_text}   base: {self.base}   mode: {self.mode}"]
        if self.bound is not None:
            lines.append(f"bound: {self.bound}")
        lines.append(f"elements ({len(self.elements)}): "
                     + self.elements.render(self.base != 10))
        if self.witnesses:
            pairs = ", ".join(f"{k}<-{v}" for k, v in sorted(self.witnesses.items()))
            lines.append(f"witnesses: {pairs}")
        if self.residual is not None:
            lines.append(f"residual: {self.residual.tag}")
            if self.residual.finite_members:
                lines.append("  members: "
                             + ", ".join(str(m) for m in self.residual.finite_members))
            for fam in self.residual.families:
                lines.append(f"  family: {fam.render()}")
        if self.excluded:
            lines.append("confirmed non-members: "
                         + ", ".join(str(v) for v in self.excluded))
        if self.missing:
            lines.append("missing minimal elements: "
                         + ", ".join(str(v) for v in self.missing))
        if self.assumptions:
            lines.append("assumptions:")
            lines.extend(f"  - {a}" for a in self.assumptions)
        if self.reason:
            lines.append(f"reason: {self.reason}")
        lines.append(f"timing: {self.timing_ms:.1f} ms   kernel: {self.kernel}")
        return "\n".join(lines)


def _spec_of(spec) -> OracleSpec:
    if isinstance(spec, OracleSpec):
        return spec
    return parse_oracle_spec(str(spec))


def _element_checks(spec: OracleSpec, values: Sequence[int]):
    """Membership re-check of reported elements; returns (witnesses, assumptions)."""
    witnesses: dict[int, int] = {}
    assumptions: list[str] = []
    for v in values:
        m = spec.contains(v)
        if m.member is False:
            raise DomainError(
                f"{v} reported minimal but is not a member of {spec.describe()}")
        if m.member is None:
            assumptions.append(
                f"membership of {v} undecided: " + "; ".join(m.assumptions))
        else:
            assumptions.extend(m.assumptions)
            if m.witness is not None and m.witness != v:
                witnesses[v] = m.witness
    return witnesses, tuple(dict.fromkeys(assumptions))


def minimal_set_bounded(spec, base: int = 10, bound: int = 10**6,
                        block_size: int = 1 << 20) -> MinimalSetReport:
    """Exact M(S) restricted to [1, bound]."""
    spec = _spec_of(spec)
    if bound < 1:
        raise DomainError(f"bound must be >= 1, got {bound}")
    t0 = time.perf_counter()
    patterns: list[str] = []
    survivors: list[int] = []
    if bound <= _KERNEL_LIMIT:
        for block in spec.value_blocks(bound, block_size):
            if len(block) == 0:
                continue
            survivors.extend(scan_segment(np.ascontiguousarray(block, dtype=np.int64),
                                          patterns, base))
    else:
        # values may exceed int64 (e.g. large perfect numbers): python path
        from ._scan_py import scan_segment as scan_py
        buf: list[int] = []
        for v in spec.enumerate(bound):
            buf.append(v)
            if len(buf) >= block_size:
                survivors.extend(scan_py(buf, patterns, base))
                buf = []
        survivors.extend(scan_py(buf, patterns, base))
    witnesses, assumptions = _element_checks(spec, survivors)
    elements = antichain_from_values(survivors, base)
    return MinimalSetReport(
        spec_text=spec.describe(), base=base, mode=MODE_BOUNDED,
        elements=elements, bound=bound, assumptions=assumptions,
        witnesses=witnesses, timing_ms=(time.perf_counter() - t0) * 1000,
        config={"bound": bound, "block_size": block_size})


def _smallest_accepted(dfa: SubwordDfa) -> Optional[tuple[int, ...]]:
    """Shortest, then lexicographically smallest, accepted word (BFS)."""
    parent: dict[int, tuple[int, int]] = {}
    seen = {dfa.start}
    queue = [dfa.start]
    target = dfa.start if dfa.start in dfa.accepting else None
    # the empty word is never a numeral; the validity component rejects it
    while queue and target is None:
        state = queue.pop(0)
        for d in range(dfa.base):
            nxt = dfa.transitions[state][d]
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (state, d)
            if nxt in dfa.accepting:
                target = nxt
                break
            queue.append(nxt)
    if target is None:
        return None
    word: list[int] = []
    state = target
    while state != dfa.start:
        state, d = parent[state]
        word.append(d)
    return tuple(reversed(word))


def minimal_set_automatic(spec, base: int = 10,
                          iteration_cap: int = 10**5) -> MinimalSetReport:
    """Exact M(S) for residue-determined sets, by the shrinking fixpoint.

    The numerically smallest accepted numeral is provably minimal: any
    smaller member would avoid the current antichain too, contradicting
    smallest-ness.
    """
    spec = _spec_of(spec)
    t0 = time.perf_counter()
    lang = spec.language_dfa(base)
    if lang is None:
        raise DomainError(
            f"{spec.describe()} is not residue-determined; use minimal_set_bounded")
    core = intersect_all([lang, valid_numeral_dfa(base)])
    elements: list[tuple[int, ...]] = []
    while True:
        if len(elements) > iteration_cap:
            raise RuntimeError(
                f"fixpoint exceeded iteration cap {iteration_cap}; "
                "the cap is an engineering guard, not evidence about M(S)")
        machine = intersect_all([core, build_avoidance_dfa(elements, base)])
        word = _smallest_accepted(machine)
        if word is None:
            break
        elements.append(word)
    values = []
    for w in elements:
        v = 0
        for d in w:
            v = v * base + d
        values.append(v)
    witnesses, assumptions = _element_checks(spec, values)
    return MinimalSetReport(
        spec_text=spec.describe(), base=base, mode=MODE_EXACT_AUTOMATIC,
        elements=antichain_from_values(values, base), assumptions=assumptions,
        witnesses=witnesses, timing_ms=(time.perf_counter() - t0) * 1000,
        config={"iteration_cap": iteration_cap})


def _as_antichain(candidate, base: int) -> Antichain:
    if isinstance(candidate, Antichain):
        return candidate
    if isinstance(candidate, MinimalSetReport):
        return candidate.elements
    return antichain_from_values(candidate, base)


def verify_completeness(spec, candidate, base: int = 10,
                        family_cap: int = 64, family_reps: int = 80,
                        extend: bool = True, max_rounds: int = 16,
                        ) -> MinimalSetReport:
    """Decide whether a candidate antichain is all of M(S).

    Residual classification drives the outcome: an empty residual is an
    immediate proof; a finite residual is checked member by member; a
    pumped family is handed to a registered tail prover (or tested
    expansion by expansion).  Any member discovered in the residual is a
    missing minimal element; with ``extend`` the candidate absorbs it
    and the analysis reruns.
    """
    from . import provers  # deferred: provers builds on this module

    spec = _spec_of(spec)
    t0 = time.perf_counter()
    antichain = _as_antichain(candidate, base)
    config = {"family_cap": family_cap, "family_reps": family_reps,
              "extend": extend, "max_rounds": max_rounds}

    # precondition: every candidate element belongs to S
    witnesses, assumptions = _element_checks(spec, antichain.values())
    assumptions = list(assumptions)

    analysis = None
    excluded: list[int] = []
    for _ in range(max_rounds):
        machines = ([build_avoidance_dfa(antichain), valid_numeral_dfa(base)]
                    + spec.necessary_conditions(base))
        residual = intersect_all(machines)
        analysis = analyze_residual(residual, family_cap)
        missing: list[int] = []
        undecided_reasons: list[str] = []
        excluded = []

        if analysis.tag == "undecided":
            undecided_reasons.append(f"residual analysis: {analysis.reason}")
        else:
            for numeral in analysis.finite_members:
                m = spec.contains(numeral.value)
                if m.member:
                    missing.append(numeral.value)
                    assumptions.extend(m.assumptions)
                elif m.member is None:
                    undecided_reasons.append(
                        f"membership of {numeral.value} undecided: "
                        + "; ".join(m.assumptions))
                else:
                    excluded.append(numeral.value)
                    assumptions.extend(m.assumptions)
            for fam in analysis.families:
                verdict = provers.family_prover(spec, fam, family_reps)
                assumptions.extend(verdict.assumptions)
                if verdict.kind == "member":
                    missing.append(verdict.value)
                else:
                    undecided_reasons.append(
                        f"family {fam.render()}: {verdict.detail}")

        if missing and extend:
            merged = sorted(set(antichain.values()) | set(missing))
            antichain = reduce_to_antichain(
                [to_numeral(v, base) for v in merged])
            w2, a2 = _element_checks(spec, antichain.values())
            witnesses.update(w2)
            assumptions.extend(a2)
            continue

        timing = (time.perf_counter() - t0) * 1000
        dedup = tuple(dict.fromkeys(assumptions))
        if missing:
            return MinimalSetReport(
                spec_text=spec.describe(), base=base, mode=MODE_INCOMPLETE,
                elements=antichain, assumptions=dedup, witnesses=witnesses,
                residual=analysis, missing=tuple(sorted(set(missing))),
                excluded=tuple(excluded), timing_ms=timing, config=config)
        if undecided_reasons:
            return MinimalSetReport(
                spec_text=spec.describe(), base=base, mode=MODE_UNDECIDED,
                elements=antichain, assumptions=dedup, witnesses=witnesses,
                residual=analysis, excluded=tuple(excluded),
                reason="; ".join(undecided_reasons),
                timing_ms=timing, config=config)
        return MinimalSetReport(
            spec_text=spec.describe(), base=base, mode=MODE_VERIFIED_COMPLETE,
            elements=antichain, assumptions=dedup, witnesses=witnesses,
            residual=analysis, excluded=tuple(excluded),
            timing_ms=timing, config=config)

    return MinimalSetReport(
        spec_text=spec.describe(), base=base, mode=MODE_UNDECIDED,
        elements=antichain, assumptions=tuple(dict.fromkeys(assumptions)),
        witnesses=witnesses, residual=analysis,
        reason=f"candidate still growing after {max_rounds} rounds",
        timing_ms=(time.perf_counter() - t0) * 1000, config=config)


def set_algebra_experiment(kind: str, s_spec, t_spec, base: int = 10,
                           bound: int = 1000) -> dict:
    """Evaluate an inclusion between minimal sets of S, T and S op T.

    kind 'union': does M(S | T) lie inside M(S) | M(T)?  (always true)
    kind 'intersection': does M(S & T) lie inside M(S) | M(T)?
    """
    from .oracles import Intersection, Union

    if kind not in ("union", "intersection"):
        raise DomainError(f"kind must be 'union' or 'intersection', got {kind!r}")
    s_spec, t_spec = _spec_of(s_spec), _spec_of(t_spec)
    combined = (Union([s_spec, t_spec]) if kind == "union"
                else Intersection([s_spec, t_spec]))
    m_s = minimal_set_bounded(s_spec, base, bound)
    m_t = minimal_set_bounded(t_spec, base, bound)
    m_c = minimal_set_bounded(combined, base, bound)
    rhs = set(m_s.values()) | set(m_t.values())
    outside = tuple(v for v in m_c.values() if v not in rhs)
    return {
        "kind": kind,
        "S": m_s, "T": m_t, "combined": m_c,
        "holds": not outside,
        "equal": set(m_c.values()) == rhs,
        "witnesses": outside,
    }
