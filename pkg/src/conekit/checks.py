"""The verification battery behind the ``verify`` command.

Each check runs one quantitative claim end to end and reports what it
computed, what it expected, and whether they agree.  All randomness is
seeded from the configuration, so a fixed configuration produces a fixed
report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import statevector
from .anyons import (
    CHARGE_E,
    CHARGE_EPS,
    CHARGE_M,
    SECTOR_ORDER,
    VACUUM,
    enumerate_sectors,
    is_degenerate,
    monodromy,
    s_matrix,
    sector_census_layout,
    standard_cone_pair,
    statistical_dimension,
    transporter_truncation,
    transporter_vacuum_identity,
)
from .geometry import (
    DUAL,
    PRIMAL,
    Patch,
    enumerate_dual_loops,
    enumerate_primal_loops,
    find_path,
    path_boundary,
)
from .index import (
    GroupAction,
    WordAlgebra,
    cp_multiply,
    phi_injectivity_check,
    phi_map,
    pimsner_popa_constant,
    select_cone_bonds,
    standard_action,
    _random_crossed,
)
from .pauli import PauliOperator, commutation_sign, path_operator, single_bond
from .stabilizer import (
    StabilizerGroup,
    ground_stabilizers,
    overlap,
    states_equal,
    syndrome,
)


@dataclass
class CheckRecord:
    check_id: str
    claim_tag: str
    passed: bool
    computed_value: object
    expected_value: object
    tolerance: object
    runtime_ms: int


def _record(check_id, claim_tag, computed, expected, tolerance, t0) -> CheckRecord:
    return CheckRecord(
        check_id=check_id,
        claim_tag=claim_tag,
        passed=computed == expected,
        computed_value=computed,
        expected_value=expected,
        tolerance=tolerance,
        runtime_ms=int((time.time() - t0) * 1000),
    )


def _frac(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


# ---------------------------------------------------------------------------


def check_lattice_counts(patch: Patch) -> CheckRecord:
    t0 = time.time()
    computed = {
        "bonds": patch.n_bonds,
        "stars": len(patch.vertices()),
        "plaquettes": len(patch.faces()),
    }
    expected = {
        "bonds": 2 * patch.L * (patch.L + 1),
        "stars": (patch.L + 1) ** 2,
        "plaquettes": patch.L**2,
    }
    return _record(
        "lattice-counts", "bond-count-formula", computed, expected, "exact", t0
    )


def check_path_kinematics(
    patch: Patch, group: StabilizerGroup, max_perimeter: int = 12
) -> CheckRecord:
    """Deformation invariance, loop triviality and endpoint syndromes,
    quantified over every canonical path and every small loop."""
    t0 = time.time()
    deform_ok = endpoints_ok = 0
    deform_bad = endpoints_bad = 0
    sites = {PRIMAL: patch.vertices(), DUAL: patch.faces()}
    for kind in (PRIMAL, DUAL):
        for a in sites[kind]:
            for b in sites[kind]:
                if a == b:
                    continue
                first = path_operator(find_path(kind, a, b, patch), patch)
                second_path = find_path(kind, b, a, patch)
                # reversing swaps which axis moves first, giving the
                # other L-shaped route between the same endpoints
                second = path_operator(second_path, patch)
                if states_equal(first, second, group):
                    deform_ok += 1
                else:
                    deform_bad += 1
                state = syndrome(first, group)
                want = path_boundary(find_path(kind, a, b, patch))
                got = (
                    state.star_sites() if kind == PRIMAL else state.plaquette_sites()
                )
                other = (
                    state.plaquette_sites() if kind == PRIMAL else state.star_sites()
                )
                if got == want and not other:
                    endpoints_ok += 1
                else:
                    endpoints_bad += 1
    loops_ok = loops_bad = 0
    identity = PauliOperator.identity(patch.n_bonds)
    for loop in enumerate_primal_loops(patch, max_perimeter) + enumerate_dual_loops(
        patch, max_perimeter
    ):
        if states_equal(path_operator(loop, patch), identity, group):
            loops_ok += 1
        else:
            loops_bad += 1
    computed = {
        "deformation_pairs_ok": deform_ok,
        "deformation_pairs_bad": deform_bad,
        "endpoint_syndromes_ok": endpoints_ok,
        "endpoint_syndromes_bad": endpoints_bad,
        "loops_ok": loops_ok,
        "loops_bad": loops_bad,
    }
    expected = dict(computed)
    expected.update(
        deformation_pairs_bad=0, endpoint_syndromes_bad=0, loops_bad=0
    )
    return _record(
        "path-kinematics",
        "path-deformation-and-loop-identities",
        computed,
        expected,
        "exact",
        t0,
    )


def check_transporter_kernel(
    patch: Patch, group: StabilizerGroup, max_n: int
) -> CheckRecord:
    t0 = time.time()
    pair = standard_cone_pair(patch)
    identity = PauliOperator.identity(patch.n_bonds)
    squares = vacuum = 0
    for kind in (CHARGE_E, CHARGE_M, CHARGE_EPS):
        for n in range(1, max_n + 1):
            t = transporter_truncation(kind, n, pair, patch)
            squares += int(t.operator * t.operator == identity)
            vacuum += int(transporter_vacuum_identity(t, group))
    te = transporter_truncation(CHARGE_E, max_n, pair, patch)
    tm = transporter_truncation(CHARGE_M, max_n, pair, patch)
    commute = commutation_sign(te.operator, tm.operator)

    # sign stability: local probes near the cone tips see an n-independent sign
    probes = [
        path_operator(find_path(PRIMAL, (1, 0), (1, 1), patch), patch),
        path_operator(find_path(DUAL, (1, 0), (2, 0), patch), patch),
        single_bond(sorted(pair[0].bonds)[0], "Y", patch),
    ]
    stable = True
    for probe in probes:
        for kind in (CHARGE_E, CHARGE_M, CHARGE_EPS):
            signs = {
                commutation_sign(
                    transporter_truncation(kind, n, pair, patch).operator, probe
                )
                for n in range(2, max_n + 1)
            }
            stable = stable and len(signs) == 1

    # the four charged vectors are pairwise orthogonal
    from .index import _base_charge_strings

    _, action = standard_action(patch, max_n, 1)
    bases = _base_charge_strings(action)
    ortho = all(
        overlap(bases[a], bases[b], group) == 0
        for i, a in enumerate(SECTOR_ORDER)
        for b in SECTOR_ORDER[i + 1 :]
    )
    computed = {
        "squares_to_identity": squares,
        "vacuum_identities": vacuum,
        "transporters_commute": commute,
        "signs_stable": stable,
        "charged_vectors_orthogonal": ortho,
    }
    expected = {
        "squares_to_identity": 3 * max_n,
        "vacuum_identities": 3 * max_n,
        "transporters_commute": 1,
        "signs_stable": True,
        "charged_vectors_orthogonal": True,
    }
    return _record(
        "transporter-kernel", "transporter-relations", computed, expected, "exact", t0
    )


def check_sector_census(
    patch: Patch, group: StabilizerGroup, budget: int, samples: int, seed: int
) -> CheckRecord:
    t0 = time.time()
    region, loop = sector_census_layout(patch)
    census = enumerate_sectors(
        region, loop, patch, group, budget, samples=samples, seed=seed
    )
    computed = {
        "labels": sorted(str(l) for l in census.labels()),
        "complete": census.complete,
        "invariance_samples": census.invariance_samples,
    }
    expected = {
        "labels": ["1", "e", "eps", "m"],
        "complete": True,
        "invariance_samples": 4 * samples,
    }
    return _record(
        "sector-census", "four-superselection-sectors", computed, expected, "exact", t0
    )


def check_dimension_sum(patch: Patch, truncation: int) -> CheckRecord:
    t0 = time.time()
    pair = standard_cone_pair(patch)
    total = sum(
        statistical_dimension(a, pair[0], patch) ** 2 for a in SECTOR_ORDER
    )
    algebra, action = standard_action(patch, truncation, 2)
    bound = pimsner_popa_constant(algebra, action)
    computed = {"dimension_sum": _frac(total), "index": _frac(bound.index)}
    expected = {"dimension_sum": _frac(Fraction(4)), "index": _frac(Fraction(4))}
    return _record(
        "dimension-sum",
        "dimension-sum-saturates-index",
        computed,
        expected,
        "exact",
        t0,
    )


def check_monodromy(patch: Patch) -> CheckRecord:
    t0 = time.time()
    table = [
        [monodromy(a, b, patch) for b in SECTOR_ORDER] for a in SECTOR_ORDER
    ]
    bicharacter = [
        [
            -1
            if (a.e_parity * b.m_parity + a.m_parity * b.e_parity) % 2
            else 1
            for b in SECTOR_ORDER
        ]
        for a in SECTOR_ORDER
    ]
    degenerate = [str(a) for a in SECTOR_ORDER if is_degenerate(a, patch)]
    computed = {"table": table, "degenerate": degenerate}
    expected = {"table": bicharacter, "degenerate": ["1"]}
    return _record(
        "monodromy-nondegeneracy",
        "only-vacuum-braids-trivially",
        computed,
        expected,
        "exact",
        t0,
    )


def check_s_matrix(patch: Patch) -> CheckRecord:
    t0 = time.time()
    s = s_matrix(patch)
    computed = {
        "entries": [[_frac(v) for v in row] for row in s.entries],
        "symmetric": s.is_symmetric(),
        "orthogonal": s.times_transpose_is_identity(),
        "det_2s": s.determinant_scaled(),
        "invertible": s.is_invertible(),
    }
    half = Fraction(1, 2)
    signs = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
    expected = {
        "entries": [[_frac(half * v) for v in row] for row in signs],
        "symmetric": True,
        "orthogonal": True,
        "det_2s": -16,
        "invertible": True,
    }
    return _record(
        "s-matrix", "s-matrix-invertible", computed, expected, "exact", t0
    )


def check_index_constant(patch: Patch, truncation: int, max_k: int = 5) -> CheckRecord:
    t0 = time.time()
    results = {}
    for k in range(1, max_k + 1):
        algebra, action = standard_action(patch, truncation, k)
        bound = pimsner_popa_constant(algebra, action)
        results[str(k)] = {
            "lambda": _frac(bound.lam),
            "index": _frac(bound.index),
            "certified": bound.all_certified,
        }
    pair = standard_cone_pair(patch)
    toy_algebra = WordAlgebra(select_cone_bonds(pair, 2, patch), patch)
    toy_action = GroupAction(
        (VACUUM, CHARGE_E),
        {
            VACUUM: PauliOperator.identity(patch.n_bonds),
            CHARGE_E: transporter_truncation(CHARGE_E, truncation, pair, patch).operator,
        },
        toy_algebra,
        truncation_n=truncation,
    )
    toy = pimsner_popa_constant(toy_algebra, toy_action)
    computed = {
        "by_k": results,
        "toy_z2": {"lambda": _frac(toy.lam), "certified": toy.all_certified},
    }
    expected = {
        "by_k": {
            str(k): {
                "lambda": _frac(Fraction(1, 4)),
                "index": _frac(Fraction(4)),
                "certified": True,
            }
            for k in range(1, max_k + 1)
        },
        "toy_z2": {"lambda": _frac(Fraction(1, 2)), "certified": True},
    }
    return _record(
        "index-constant", "cone-index-equals-four", computed, expected, "exact", t0
    )


def check_crossed_product(
    patch: Patch, group: StabilizerGroup, truncation: int, samples: int, seed: int
) -> CheckRecord:
    t0 = time.time()
    _, action = standard_action(patch, truncation, 3)
    rng = random.Random(seed)
    mult_ok = 0
    for _ in range(samples):
        x = _random_crossed(action, rng)
        y = _random_crossed(action, rng)
        if phi_map(cp_multiply(x, y)) == phi_map(x) * phi_map(y):
            mult_ok += 1
    injective = phi_injectivity_check(
        patch, group, truncation, k=2, trials=25, seed=seed
    )
    computed = {"multiplicative_pairs": mult_ok, "injective": injective}
    expected = {"multiplicative_pairs": samples, "injective": True}
    return _record(
        "crossed-product",
        "block-map-multiplicative-injective",
        computed,
        expected,
        "exact",
        t0,
    )


def check_stabilizer_oracle(pairs: int, seed: int, tolerance: float = 1e-9) -> CheckRecord:
    """Compare the GF(2) engine with dense vectors on the 12-qubit patch."""
    t0 = time.time()
    patch = Patch(2)
    group = ground_stabilizers(patch)
    omega = statevector.ground_state_vector(patch)
    rng = random.Random(seed)
    agree = 0
    for _ in range(pairs):
        ops = []
        for _ in range(2):
            x = rng.randrange(1 << patch.n_bonds)
            z = rng.randrange(1 << patch.n_bonds)
            phase = ((x & z).bit_count() + 2 * rng.randrange(2)) % 4
            ops.append(PauliOperator(patch.n_bonds, x, z, phase))
        f, g = ops
        dense = statevector.excited_overlap(f, g, omega)
        exact = complex(overlap(f, g, group))
        same_state = states_equal(f, g, group)
        dense_same = (
            np.linalg.norm(
                statevector.apply_pauli(f, omega) - statevector.apply_pauli(g, omega)
            )
            < tolerance
        )
        if abs(dense - exact) < tolerance and same_state == dense_same:
            agree += 1
    computed = {"agreements": agree}
    expected = {"agreements": pairs}
    return _record(
        "stabilizer-oracle",
        "engine-matches-dense-oracle",
        computed,
        expected,
        tolerance,
        t0,
    )


def run_battery(config) -> list[CheckRecord]:
    """Every check, at the configured sizes, in a stable order."""
    patch = Patch(config.size)
    group = ground_stabilizers(patch)
    return [
        check_lattice_counts(patch),
        check_path_kinematics(patch, group),
        check_transporter_kernel(patch, group, config.truncation),
        check_sector_census(patch, group, config.budget, config.samples, config.seed),
        check_dimension_sum(patch, config.truncation),
        check_monodromy(patch),
        check_s_matrix(patch),
        check_index_constant(patch, config.truncation),
        check_crossed_product(patch, group, config.truncation, config.samples, config.seed),
        check_stabilizer_oracle(200, config.seed),
    ]
