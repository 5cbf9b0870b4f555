"""Equivalence of systems by change of coordinates.

Two generator functions are conjugated when a state recoding h (any
bijection) and a mask recoding h' (a group member, see omega) make every
masked-update diagram commute: h(phi^nu(mu)) = psi^(h'(nu))(h(mu)).  The
diagram formulation, the discrete-run formulation and the continuous-run
formulation are equivalent, so the run checks here serve as cross-validation
of the diagram decision, not as an independent decision procedure.

The exhaustive search enumerates state recodings in lexicographic table order
and prunes with two proved necessary conditions: a witness must map fixed
points onto fixed points, and (from the full-update diagram, since every mask
recoding fixes the full mask) must satisfy psi = h . phi . h^-1 on the nose.
Both prunes are proved necessary conditions of conjugacy itself, so the
search stays complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    Bits,
    CapabilityError,
    State,
    TruthTable,
    all_states,
    apply_masked,
    check_same_width,
    fixed_points,
)
from .graph import is_transitive_exists, is_transitive_forall
from .omega import (
    StateBijection,
    compose,
    enumerate_omega,
    invert,
    is_in_omega,
    map_progressive_function,
    map_sequence,
)
from .runs import (
    LassoMaskSequence,
    ProgressiveFunction,
    continuous_run,
    detect_period,
    discrete_run,
    eval_signal,
    full_update_sequence,
)

SEARCH_MAX_WIDTH = 3


@dataclass(frozen=True)
class ConjugacyWitness:
    """A candidate change of coordinates: h recodes states, h_prime recodes
    masks and must be a group member (the conjugacy criterion requires it)."""

    h: StateBijection
    h_prime: StateBijection

    def __post_init__(self):
        check_same_width(self.h.forward[0], self.h_prime.forward[0])
        if not is_in_omega(self.h_prime).verdict:
            raise ValueError("mask recoding h' is not a group member")

    @property
    def width(self) -> int:
        return self.h.width


def invert_witness(w: ConjugacyWitness) -> ConjugacyWitness:
    """If (h, h') carries phi to psi, (h^-1, h'^-1) carries psi to phi."""
    return ConjugacyWitness(invert(w.h), invert(w.h_prime))


def compose_witnesses(w2: ConjugacyWitness, w1: ConjugacyWitness) -> ConjugacyWitness:
    """Chain two conjugations: w1 from phi to psi, then w2 from psi to chi."""
    return ConjugacyWitness(compose(w2.h, w1.h), compose(w2.h_prime, w1.h_prime))


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    witness: Optional[ConjugacyWitness] = None
    counterexample: Optional[tuple[Bits, Bits]] = None  # (mask, state)

    def __post_init__(self):
        if self.equivalent != (self.witness is not None):
            raise ValueError("equivalent verdicts carry a witness, failures do not")
        if self.equivalent and self.counterexample is not None:
            raise ValueError("a passing verdict cannot carry a counterexample")


def check_conjugacy(phi: TruthTable, psi: TruthTable, w: ConjugacyWitness) -> EquivalenceVerdict:
    """Decide whether every masked-update diagram commutes for this witness.

    On failure the counterexample is the first violating (mask, state) pair
    in lexicographic encoding order.
    """
    width = check_same_width(phi.outputs[0], psi.outputs[0])
    if w.width != width:
        raise ValueError(f"witness width {w.width} does not match tables ({width})")
    for nu in all_states(width):
        nu_mapped = w.h_prime.apply(nu)
        for mu in all_states(width):
            lhs = w.h.apply(apply_masked(phi, nu, mu))
            rhs = apply_masked(psi, nu_mapped, w.h.apply(mu))
            if lhs != rhs:
                return EquivalenceVerdict(False, None, (nu, mu))
    return EquivalenceVerdict(True, w, None)


def check_conjugacy_runs(
    phi: TruthTable,
    psi: TruthTable,
    w: ConjugacyWitness,
    corpus: Sequence[tuple[State, ProgressiveFunction]],
    k_max: int = 8,
) -> bool:
    """Confirm the discrete-run and continuous-run forms of conjugacy on a
    corpus: h maps each run of phi onto the run of psi under the recoded
    schedule from the recoded start."""
    for mu, rho in corpus:
        alpha = rho.masks
        alpha_mapped = map_sequence(w.h_prime, alpha)
        mu_mapped = w.h.apply(mu)
        for k in range(-1, k_max + 1):
            lhs = w.h.apply(discrete_run(phi, alpha, mu, k))
            rhs = discrete_run(psi, alpha_mapped, mu_mapped, k)
            if lhs != rhs:
                return False
        x = continuous_run(phi, rho, mu)
        y = continuous_run(psi, map_progressive_function(w.h_prime, rho), mu_mapped)
        probes = [rho.time_at(0) - 1]
        structural = len(x.breakpoints) + len(y.breakpoints) + 4
        for k in range(max(k_max + 1, structural)):
            probes.append(rho.time_at(k))
        for t in probes:
            if w.h.apply(eval_signal(x, t)) != eval_signal(y, t):
                return False
    return True


def default_run_corpus(width: int) -> list[tuple[State, ProgressiveFunction]]:
    """Deterministic corpus: from every state, the full-update schedule, a
    staggered one, and one schedule starting with each single mask (the proof
    of the run-to-diagram direction uses exactly such schedules)."""
    corpus = []
    full = full_update_sequence(width)
    for mu in all_states(width):
        corpus.append((mu, ProgressiveFunction.uniform(full)))
        corpus.append((mu, ProgressiveFunction.uniform(full, start="1/2", step="1/3")))
        for first in all_states(width):
            masks = LassoMaskSequence((first,), (Bits.full(width),))
            corpus.append((mu, ProgressiveFunction.uniform(masks)))
    return corpus


def recode(phi: TruthTable, h: StateBijection) -> TruthTable:
    """The table of the system after the state change h: h . phi . h^-1."""
    if h.width != phi.width:
        raise ValueError("recoding width does not match the table")
    outputs = [None] * len(phi.outputs)
    for mu in all_states(phi.width):
        outputs[h.apply(mu).value] = h.apply(phi.apply(mu))
    return TruthTable(phi.width, tuple(outputs))


def find_equivalence(phi: TruthTable, psi: TruthTable) -> EquivalenceVerdict:
    """Exhaustive witness search in lexicographic order; first hit wins.

    Capped at small widths: the space is (2^n)! state recodings crossed with
    the mask-recoding group.
    """
    width = check_same_width(phi.outputs[0], psi.outputs[0])
    if width > SEARCH_MAX_WIDTH:
        raise CapabilityError(f"equivalence search supports width <= {SEARCH_MAX_WIDTH}")
    fp_phi = sorted(fixed_points(phi))
    fp_psi = fixed_points(psi)
    omega = enumerate_omega(width)
    for perm in itertools.permutations(range(1 << width)):
        h = StateBijection.from_ints(width, perm)
        if {h.apply(f) for f in fp_phi} != fp_psi:
            continue
        if recode(phi, h) != psi:
            continue
        for h_prime in omega:
            w = ConjugacyWitness(h, h_prime)
            verdict = check_conjugacy(phi, psi, w)
            if verdict.equivalent:
                return verdict
    return EquivalenceVerdict(False)


def has_nontrivial_conjugate(phi: TruthTable) -> bool:
    """Whether some psi different from phi is conjugated to phi (the
    single-system notion of admissible perturbations; distinct from the
    parameterized-family notion in bifurcation)."""
    if phi.width > SEARCH_MAX_WIDTH:
        raise CapabilityError(f"search supports width <= {SEARCH_MAX_WIDTH}")
    omega = enumerate_omega(phi.width)
    for perm in itertools.permutations(range(1 << phi.width)):
        h = StateBijection.from_ints(phi.width, perm)
        psi = recode(phi, h)
        if psi == phi:
            continue
        for h_prime in omega:
            if check_conjugacy(phi, psi, ConjugacyWitness(h, h_prime)).equivalent:
                return True
    return False


@dataclass(frozen=True)
class InvariantsTransferReport:
    """What a verified conjugacy must carry across; any False here means an
    implementation bug, not a property of the systems."""

    fixed_points_ok: bool
    periods_ok: bool
    transitivity_ok: bool
    identity_ok: bool

    @property
    def ok(self) -> bool:
        return (self.fixed_points_ok and self.periods_ok
                and self.transitivity_ok and self.identity_ok)


def check_invariants_transfer(
    phi: TruthTable,
    psi: TruthTable,
    w: ConjugacyWitness,
    corpus: Optional[Sequence[tuple[State, ProgressiveFunction]]] = None,
) -> InvariantsTransferReport:
    """Verify the conjugacy-invariance package for a checked witness: image
    of the fixed points, preserved minimal periods, matching transitivity
    verdicts, and the identity/identity dichotomy."""
    if not check_conjugacy(phi, psi, w).equivalent:
        raise ValueError("witness does not conjugate the given tables")
    if corpus is None:
        corpus = default_run_corpus(phi.width)

    fp_ok = {w.h.apply(f) for f in fixed_points(phi)} == fixed_points(psi)

    periods_ok = True
    for mu, rho in corpus:
        left = detect_period(continuous_run(phi, rho, mu))
        right = detect_period(
            continuous_run(psi, map_progressive_function(w.h_prime, rho), w.h.apply(mu)))
        if (left is None) != (right is None):
            periods_ok = False
            break
        if left is not None and left[0] != right[0]:
            periods_ok = False
            break

    transitivity_ok = (
        is_transitive_exists(phi) == is_transitive_exists(psi)
        and is_transitive_forall(phi) == is_transitive_forall(psi)
    )
    identity_ok = phi.is_identity == psi.is_identity
    return InvariantsTransferReport(fp_ok, periods_ok, transitivity_ok, identity_ok)
