import random
from itertools import combinations

import pytest

from baercode.encoder import build_data_matrix, encode_all
from baercode.errors import (
    BaerCodeError,
    NoConsistentGroupError,
    OmegaRankDeficientError,
)
from baercode.galois import Field
from baercode.params import CodeParams, validate
from baercode.repair1 import (
    estimate,
    format_repair_record,
    helper_repair_symbols,
    omega_build,
    parse_repair_record,
    phi_matrix,
    theta,
    testgroup_repair as tg_repair,
    verify_theta_all,
)


def encoded_cluster(code, fld, seed):
    rng = random.Random(seed)
    msg = tuple(rng.randrange(fld.p) for _ in range(code.f_mbr))
    dm = build_data_matrix(msg, code, fld)
    return msg, {s.index: s for s in encode_all(dm, code, fld)}


def test_default_exponents_and_truncation(ex3_code, ex3_search):
    cfg = ex3_search.cfg
    assert cfg.exponents == (1, 37, 73)        # alpha*n*(j-1) + 1
    assert cfg.omega.shape == (3, 3)
    cols = cfg.omega_cols(5)
    assert cols.shape == (3, 2)
    assert cols.tolist() == [row[:2] for row in cfg.omega.tolist()]
    assert cfg.omega_cols(4).shape == (3, 3)


def test_single_component_omega_is_trivial():
    code = validate(CodeParams(n=3, k=1, d_set=(2,), b=0, alpha=2))
    cfg = omega_build(code, Field(5))
    assert cfg.omega.tolist() == [[1]]


def test_small_field_rank_deficiency(ex3_code):
    # alpha*n = 36 >= p-1 = 6 forces exponent collisions over GF(7)
    with pytest.raises(OmegaRankDeficientError):
        omega_build(ex3_code, Field(7))
    cfg = omega_build(ex3_code, Field(7), check=False)
    assert not cfg.rank_ok


def test_repair_vector_shapes_and_zero(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    _, shares = encoded_cluster(ex3_code, fld, 1)
    assert len(helper_repair_symbols(shares[2], 1, 4, cfg)) == 3
    assert len(helper_repair_symbols(shares[2], 1, 5, cfg)) == 2
    _, zeros = encoded_cluster(ex3_code, fld, None)
    zero_shares = {
        s.index: s
        for s in encode_all(
            build_data_matrix([0] * 6, ex3_code, fld), ex3_code, fld
        )
    }
    assert helper_repair_symbols(zero_shares[2], 1, 4, cfg) == (0, 0, 0)


def test_projection_reflexivity_exhaustive(ex3_code, ex3_search):
    # the compressed projection of h's share onto f equals f's onto h
    fld, cfg = ex3_search.field, ex3_search.cfg
    _, shares = encoded_cluster(ex3_code, fld, 2)
    for h in range(1, 7):
        for f in range(1, 7):
            if h == f:
                continue
            for d in (4, 5):
                assert helper_repair_symbols(shares[h], f, d, cfg) == \
                    helper_repair_symbols(shares[f], h, d, cfg)


def test_theta_shape_and_column_structure(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    th = theta((1, 2, 3), 5, cfg)
    assert th.shape == (6, 6)
    # independent construction: column (t*z_d + j) stacks omega[i][j] * psi_h_t(i)^T
    from baercode.encoder import coeff_segment
    for t, h in enumerate((1, 2, 3)):
        for j in range(2):
            col = []
            for i in range(1, 4):
                seg = coeff_segment(fld, h, i, 2)
                col.extend(v * cfg.omega.data[i - 1][j] % fld.p for v in seg)
            assert list(th.col(t * 2 + j)) == col


def test_theta_columns_permute_block_kruskal_form(ex3_code, ex3_search):
    # at d = d_min (z_d = z) the columns are a permutation of the stacked
    # [omega_row x helper-segment] construction
    fld, cfg = ex3_search.field, ex3_search.cfg
    from baercode.encoder import coeff_segment
    helpers = (2, 4)
    th = theta(helpers, 4, cfg)
    xi_cols = []
    for j in range(3):            # omega column index
        for t, h in enumerate(helpers):
            col = []
            for i in range(1, 4):
                seg = coeff_segment(fld, h, i, 2)
                col.extend(v * cfg.omega.data[i - 1][j] % fld.p for v in seg)
            xi_cols.append(tuple(col))
    theta_cols = [tuple(th.col(c)) for c in range(6)]
    assert sorted(theta_cols) == sorted(xi_cols)
    assert set(theta_cols) == set(xi_cols)


def test_phi_matrix_block_structure(ex3_code, ex3_search):
    fld = ex3_search.field
    phi = phi_matrix(ex3_code, fld, 3)
    assert phi.shape == (6, 3)
    from baercode.encoder import coeff_segment
    for i in range(1, 4):
        seg = coeff_segment(fld, 3, i, 2)
        for r in range(2):
            for c in range(3):
                want = seg[r] if c == i - 1 else 0
                assert phi[(i - 1) * 2 + r, c] == want


def test_estimate_exact_for_honest_subsets(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    _, shares = encoded_cluster(ex3_code, fld, 3)
    for f in range(1, 7):
        others = [h for h in range(1, 7) if h != f]
        for d in (4, 5):
            span = d - 2
            for subset in combinations(others, span):
                rho = []
                for h in subset:
                    rho.extend(helper_repair_symbols(shares[h], f, d, cfg))
                got = estimate(rho, theta(subset, d, cfg))
                assert got == shares[f].x
                # independent path: rho equals x_f @ Theta for honest inputs
                assert tuple(rho) == theta(subset, d, cfg).left_mul(shares[f].x)


def test_estimate_zero_message(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    zeros = encode_all(build_data_matrix([0] * 6, ex3_code, fld), ex3_code, fld)
    rho = []
    for h in (1, 2, 3):
        rho.extend(helper_repair_symbols(zeros[h - 1], 6, 5, cfg))
    assert estimate(rho, theta((1, 2, 3), 5, cfg)) == (0,) * 6


def test_testgroup_repair_honest_and_corrupted(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    rng = random.Random(5)
    _, shares = encoded_cluster(ex3_code, fld, 5)
    for f in range(1, 7):
        others = [h for h in range(1, 7) if h != f]
        for d in (4, 5):
            for helpers in combinations(others, d):
                syms = {h: helper_repair_symbols(shares[h], f, d, cfg) for h in helpers}
                assert tg_repair(syms, f, d, cfg) == shares[f].x
                for bad in helpers:
                    poisoned = dict(syms)
                    poisoned[bad] = tuple(rng.randrange(fld.p) for _ in syms[bad])
                    assert tg_repair(poisoned, f, d, cfg) == shares[f].x


def test_testgroup_combinatorics(ex3_code, ex3_search):
    # d=5, b=1: test-groups of size 4, estimate subsets of size 3
    fld, cfg = ex3_search.field, ex3_search.cfg
    _, shares = encoded_cluster(ex3_code, fld, 6)
    helpers = [h for h in range(1, 7) if h != 6][:5]
    assert len(list(combinations(helpers, 5 - 1))) == 5
    assert len(list(combinations(helpers[:4], 3))) == 4
    syms = {h: helper_repair_symbols(shares[h], 6, 5, cfg) for h in helpers}
    assert tg_repair(syms, 6, 5, cfg) == shares[6].x


def test_testgroup_rejects_bad_inputs(ex3_code, ex3_search):
    fld, cfg = ex3_search.field, ex3_search.cfg
    _, shares = encoded_cluster(ex3_code, fld, 7)
    syms = {h: helper_repair_symbols(shares[h], 1, 4, cfg) for h in (2, 3, 4)}
    with pytest.raises(BaerCodeError):
        tg_repair(syms, 1, 4, cfg)       # only 3 of d=4 helpers
    syms = {h: helper_repair_symbols(shares[h], 1, 4, cfg) for h in (1, 2, 3, 4)}
    with pytest.raises(BaerCodeError):
        tg_repair(syms, 1, 4, cfg)       # helper equals failed node


def test_beyond_model_corruption_raises(ex3_code, ex3_search):
    # 2 = b+1 garbage helpers out of d=4: every test-group disagrees
    fld, cfg = ex3_search.field, ex3_search.cfg
    rng = random.Random(8)
    _, shares = encoded_cluster(ex3_code, fld, 8)
    helpers = (2, 3, 4, 5)
    syms = {h: helper_repair_symbols(shares[h], 1, 4, cfg) for h in helpers}
    syms[2] = tuple(rng.randrange(fld.p) for _ in syms[2])
    syms[3] = tuple(rng.randrange(fld.p) for _ in syms[3])
    with pytest.raises(NoConsistentGroupError):
        tg_repair(syms, 1, 4, cfg)


def test_verify_theta_reports(ex3_code, ex3_search):
    good = verify_theta_all(ex3_code, ex3_search.field, ex3_search.cfg)
    assert good.ok and good.checked == 35      # C(6,2) + C(6,3)
    bad = verify_theta_all(ex3_code, Field(7))
    assert not bad.ok
    assert bad.omega_deficient == (4, 5)
    assert len(bad.singular) == 35


def test_verify_trivial_single_component():
    code = validate(CodeParams(n=3, k=1, d_set=(2,), b=0, alpha=2))
    report = verify_theta_all(code, Field(5))
    assert report.ok


def test_find_field_rejects_small_primes(ex3_code, ex3_search):
    assert 7 in ex3_search.rejected
    assert ex3_search.report.ok
    assert ex3_search.field.p >= ex3_code.n + 1


def test_repair_record_round_trip():
    text = format_repair_record(3, 1, 4, (7, 0, 12))
    assert text == "BAERR1 d=4 f=1 h=3\n7\n0\n12\n"
    assert parse_repair_record(text) == (3, 1, 4, (7, 0, 12))
    with pytest.raises(BaerCodeError):
        parse_repair_record("BOGUS\n1\n")
