"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.  Heavy
sweeps (all 256 two-variable generator functions crossed with a 50-schedule
corpus) are computed once in session fixtures and shared.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from boolsys.core import (
    TruthTable,
    all_states,
    all_tables,
    fixed_points,
    is_fixed_point,
    nullclin,
)
from boolsys.bifurcation import (
    ParamFamily,
    bifurcation_diagram,
    family_structurally_stable,
    fixed_point_diagram,
)
from boolsys.conjugacy import (
    ConjugacyWitness,
    check_conjugacy,
    check_conjugacy_runs,
    check_invariants_transfer,
    default_run_corpus,
    find_equivalence,
    recode,
)
from boolsys.formats import parse_truth_table, render_family, render_truth_table
from boolsys.graph import build_graph, is_transitive_exists, is_transitive_forall, orbit
from boolsys.omega import StateBijection, compose, enumerate_omega, invert
from boolsys.runs import continuous_run, eval_signal, final_value, signal_values
from conftest import (
    DEMO2,
    H_FORWARD,
    H_PRIME_FORWARD,
    CONJ_PHI,
    CONJ_PSI,
    b,
    random_rho,
    rho_corpus,
)
from oracles import transitive_forall_oracle
from test_conjugacy import DIAGRAM_INSTANCES


def report(criterion: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"{tag}  {criterion}{suffix}")
    assert ok, f"{criterion}{suffix}"


@pytest.fixture(scope="session")
def sweep_corpus():
    return rho_corpus(2, 50)


@pytest.fixture(scope="session")
def run_sweep(sweep_corpus):
    """(phi, mu, rho, signal) for every two-variable function, state and
    corpus schedule."""
    out = []
    for phi in all_tables(2):
        for mu in all_states(2):
            for rho in sweep_corpus:
                out.append((phi, mu, rho, continuous_run(phi, rho, mu)))
    return out


@pytest.fixture(scope="session")
def conjugate_pairs():
    """Every conjugate pair of two-variable functions with its first witness.

    Any witness must satisfy psi = h . phi . h^-1 (full-update diagram with
    the full mask fixed by every mask recoding), so enumerating state
    recodings per phi and filtering through the diagram check discovers
    exactly the conjugate pairs.
    """
    import itertools

    omega2 = enumerate_omega(2)
    bijections = [StateBijection.from_ints(2, p) for p in itertools.permutations(range(4))]
    found: dict[tuple, ConjugacyWitness] = {}
    tables: dict[tuple, TruthTable] = {}
    for phi in all_tables(2):
        key_phi = tuple(o.value for o in phi.outputs)
        tables[key_phi] = phi
        for h in bijections:
            psi = recode(phi, h)
            key = (key_phi, tuple(o.value for o in psi.outputs))
            tables[key[1]] = psi
            if key in found:
                continue
            for h_prime in omega2:
                w = ConjugacyWitness(h, h_prime)
                if check_conjugacy(phi, psi, w).equivalent:
                    found[key] = w
                    break
    return found, tables


def test_criterion_1_fixed_point_characterizations(run_sweep):
    start = time.monotonic()
    ok = True
    for phi in all_tables(2):
        graph = build_graph(phi)
        meet = nullclin(phi, 1) & nullclin(phi, 2)
        for mu in all_states(2):
            by_table = phi.apply(mu) == mu
            by_graph = graph.successor_states(mu) == {mu}
            by_nullclins = mu in meet
            ok = ok and (by_table == by_graph == by_nullclins)
    singleton_seen: dict[tuple, bool] = {}
    for phi, mu, rho, x in run_sweep:
        is_rest = signal_values(x) == {mu}
        if is_rest != is_fixed_point(phi, mu):
            ok = False
            break
    # The public orbit operation agrees on a sample of the same triples.
    rng = random.Random(99)
    for phi, mu, rho, x in rng.sample(run_sweep, 500):
        if orbit(phi, rho, mu).reachable != signal_values(x):
            ok = False
            break
    elapsed = time.monotonic() - start
    report("criterion-1 fixed-point six-way equivalence", ok and elapsed < 5.0,
           f"{elapsed:.2f}s over 256 functions x 4 states x 50 schedules")


def test_criterion_2_final_values_are_fixed_points(run_sweep):
    start = time.monotonic()
    checked = 0
    ok = True
    for phi, mu, rho, x in run_sweep:
        v = final_value(x)
        if v is not None:
            checked += 1
            ok = ok and phi.apply(v) == v
    elapsed = time.monotonic() - start
    report("criterion-2 final values are fixed points", ok and elapsed < 10.0,
           f"{checked} constant-tail runs, {elapsed:.2f}s")


def test_criterion_3_accessible_fixed_points_are_final(run_sweep):
    start = time.monotonic()
    checked = 0
    ok = True
    for phi, mu, rho, x in run_sweep:
        hit = next(((t, v) for t, v in x.breakpoints if is_fixed_point(phi, v)), None)
        if hit is None:
            continue
        t_prime, mu_prime = hit
        checked += 1
        for k in range(10):
            probe = t_prime + Fraction(7 * k, 3)
            if eval_signal(x, probe) != mu_prime:
                ok = False
                break
        if not ok:
            break
    elapsed = time.monotonic() - start
    report("criterion-3 runs stay at reached fixed points", ok,
           f"{checked} fixed-point hits probed, {elapsed:.2f}s")


def test_criterion_4_transitivity_oracle_agreement():
    start = time.monotonic()
    ok = True
    separator = None
    for phi in all_tables(2):
        forall_fast = is_transitive_forall(phi)
        exists_fast = is_transitive_exists(phi)
        if forall_fast != transitive_forall_oracle(phi):
            ok = False
            break
        if forall_fast and not exists_fast:
            ok = False
            break
        if exists_fast and fixed_points(phi):
            ok = False
            break
        if exists_fast and not forall_fast and separator is None:
            separator = tuple(o.value for o in phi.outputs)
    ok = ok and separator is not None
    elapsed = time.monotonic() - start
    report("criterion-4 for-all transitivity matches the lasso oracle",
           ok and elapsed < 60.0,
           f"separating function outputs {separator}, {elapsed:.2f}s")


def test_criterion_5_omega_sizes_and_group_laws():
    sizes = {n: len(enumerate_omega(n)) for n in (1, 2, 3)}
    ok = sizes == {1: 1, 2: 2, 3: 6}
    swap = StateBijection.coordinate_swap()
    ok = ok and enumerate_omega(2) == [StateBijection.identity(2), swap]
    for n in (1, 2, 3):
        members = set(enumerate_omega(n))
        ok = ok and StateBijection.identity(n) in members
        for h in members:
            ok = ok and invert(h) in members
            for g in members:
                ok = ok and compose(h, g) in members
    report("criterion-5 mask-recoding group sizes and laws", ok,
           f"sizes {sizes}")


def test_criterion_6_worked_conjugacy_example():
    from boolsys.core import apply_masked

    h = StateBijection.from_ints(2, H_FORWARD)
    h_prime = StateBijection.from_ints(2, H_PRIME_FORWARD)
    w = ConjugacyWitness(h, h_prime)
    ok = check_conjugacy(CONJ_PHI, CONJ_PSI, w).equivalent
    # All four mask-diagram instance tables, the trivial zero-mask one included.
    for mu in all_states(2):
        zero = b("00")
        ok = ok and h.apply(apply_masked(CONJ_PHI, zero, mu)) == apply_masked(
            CONJ_PSI, h_prime.apply(zero), h.apply(mu))
    for (nu_s, nu_mapped_s), rows in DIAGRAM_INSTANCES.items():
        for mu_s, top_right_s, bottom_left_s, bottom_right_s in rows:
            nu, mu = b(nu_s), b(mu_s)
            ok = ok and apply_masked(CONJ_PHI, nu, mu) == b(top_right_s)
            ok = ok and h.apply(mu) == b(bottom_left_s)
            ok = ok and apply_masked(CONJ_PSI, b(nu_mapped_s), h.apply(mu)) == b(bottom_right_s)
            ok = ok and h.apply(b(top_right_s)) == b(bottom_right_s)
    rng = random.Random(606)
    corpus = [(mu, random_rho(rng, 2)) for mu in all_states(2) for _ in range(5)]
    ok = ok and check_conjugacy_runs(CONJ_PHI, CONJ_PSI, w, corpus, k_max=8)
    report("criterion-6 worked equivalence example accepted", ok,
           "12 nontrivial diagram instances + 20 corpus runs")


def test_criterion_7_diagram_check_equals_run_check():
    rng = random.Random(707)
    omega2 = enumerate_omega(2)
    corpus = default_run_corpus(2)
    agree = 0
    verdicts = {True: 0, False: 0}
    for i in range(100):
        phi = TruthTable.from_ints(2, [rng.randrange(4) for _ in range(4)])
        h = StateBijection.from_ints(2, rng.sample(range(4), 4))
        if i % 2 == 0:
            psi = recode(phi, h)  # likely-true candidates
        else:
            psi = TruthTable.from_ints(2, [rng.randrange(4) for _ in range(4)])
        w = ConjugacyWitness(h, rng.choice(omega2))
        by_diagram = check_conjugacy(phi, psi, w).equivalent
        by_runs = check_conjugacy_runs(phi, psi, w, corpus, k_max=8)
        if by_diagram == by_runs:
            agree += 1
        verdicts[by_diagram] += 1
    ok = agree == 100 and verdicts[True] > 0 and verdicts[False] > 0
    report("criterion-7 diagram and run checks agree", ok,
           f"{verdicts[True]} passing / {verdicts[False]} failing candidates")


def test_criterion_8_invariance_over_conjugate_sweep(conjugate_pairs):
    start = time.monotonic()
    found, tables = conjugate_pairs
    transitivity_cache: dict[tuple, tuple[bool, bool]] = {}

    def transitivity(key) -> tuple[bool, bool]:
        if key not in transitivity_cache:
            phi = tables[key]
            transitivity_cache[key] = (is_transitive_exists(phi), is_transitive_forall(phi))
        return transitivity_cache[key]

    corpus = [(mu, rho) for mu in all_states(2) for rho in rho_corpus(2, 2, seed=808)]
    ok = True
    for (key_phi, key_psi), w in found.items():
        phi, psi = tables[key_phi], tables[key_psi]
        report_obj = check_invariants_transfer(phi, psi, w, corpus)
        ok = ok and report_obj.ok
        ok = ok and transitivity(key_phi) == transitivity(key_psi)
        if not ok:
            break
    # Identity dichotomy over the discovered pairs.
    ident_key = tuple(range(4))
    for (key_phi, key_psi) in found:
        ok = ok and ((key_phi == ident_key) == (key_psi == ident_key))
    # The exhaustive search agrees with the sweep's membership on a sample.
    rng = random.Random(88)
    sample_tables = [TruthTable.from_ints(2, [rng.randrange(4) for _ in range(4)])
                     for _ in range(40)]
    for i in range(0, 40, 2):
        phi, psi = sample_tables[i], sample_tables[i + 1]
        key = (tuple(o.value for o in phi.outputs), tuple(o.value for o in psi.outputs))
        ok = ok and find_equivalence(phi, psi).equivalent == (key in found)
    elapsed = time.monotonic() - start
    report("criterion-8 invariance package over the conjugacy sweep",
           ok and elapsed < 300.0,
           f"{len(found)} conjugate pairs, {elapsed:.1f}s")


def test_criterion_9_bifurcation_surrogates(capsys):
    id_not = ParamFamily.of([TruthTable.identity(1), TruthTable.complement(1)])
    ok = not family_structurally_stable(id_not)
    ok = ok and bifurcation_diagram(id_not).class_count == 2
    duplicated = ParamFamily.of([DEMO2, DEMO2])
    ok = ok and family_structurally_stable(duplicated)
    ok = ok and bifurcation_diagram(duplicated).class_count == 1
    no_fp = ParamFamily.of([TruthTable.complement(2), CONJ_PHI])
    diagram = fixed_point_diagram(no_fp)
    ok = ok and all(not fps for _, fps in diagram.entries)
    ok = ok and diagram.uninformative is True
    # The CLI surfaces the note.
    from boolsys.cli import main as cli_main
    import tempfile, os

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "nofp.fam")
        with open(path, "w") as fh:
            fh.write(render_family(no_fp))
        code = cli_main(["bifurcation", path, "--fixed-points"])
        out = capsys.readouterr().out
        ok = ok and code == 0 and "no fixed points anywhere" in out
    report("criterion-9 bifurcation surrogate families", ok,
           "2-class, 1-class and fixed-point-free families behave as required")


def test_criterion_10_cli_determinism_and_roundtrip(tmp_path):
    ok = True
    for phi in all_tables(2):
        ok = ok and parse_truth_table(render_truth_table(phi)) == phi
    demo = tmp_path / "demo2.tt"
    demo.write_text(render_truth_table(DEMO2))
    outputs = set()
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "boolsys.cli", "fixed-points", str(demo),
             "--format", "json"],
            capture_output=True, check=True)
        outputs.add(proc.stdout)
    proc_portrait = [
        subprocess.run([sys.executable, "-m", "boolsys.cli", "portrait", str(demo)],
                       capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    ok = ok and len(outputs) == 1 and proc_portrait[0] == proc_portrait[1]
    # Search-driven outputs under fresh interpreter hash seeds.
    phi_path = tmp_path / "phi.tt"
    psi_path = tmp_path / "psi.tt"
    phi_path.write_text(render_truth_table(CONJ_PHI))
    psi_path.write_text(render_truth_table(CONJ_PSI))
    searches = {
        subprocess.run([sys.executable, "-m", "boolsys.cli", "conjugate",
                        "--search", str(phi_path), str(psi_path),
                        "--format", "json"],
                       capture_output=True, check=True).stdout
        for _ in range(2)
    }
    fam_path = tmp_path / "fam.fam"
    fam_path.write_text(render_family(ParamFamily.of(
        [TruthTable.identity(1), TruthTable.complement(1)])))
    diagrams = {
        subprocess.run([sys.executable, "-m", "boolsys.cli", "bifurcation",
                        str(fam_path), "--format", "json"],
                       capture_output=True, check=True).stdout
        for _ in range(2)
    }
    ok = ok and len(searches) == 1 and len(diagrams) == 1
    report("criterion-10 byte-determinism and format round-trip", ok,
           "256 round-trips, repeated CLI invocations byte-identical")
