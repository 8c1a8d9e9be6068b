import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddperfect.arith import legendre_two
from oddperfect.criteria import (
    CRITERIA,
    Outcome,
    ShapeSpec,
    apply_criterion,
    euler_form_filter,
    parity_certificate,
    parity_entry,
    parse_shape,
    residue_matrix,
    support_filter,
    theorem1_filter,
    theorem2_filter,
)
from oddperfect.errors import DomainError, GrammarError, UsageError
from oddperfect.factor import is_prime, sigma_prime_power
from oracles import brute_legendre, trial_factor, trial_primes

ODD_PRIMES = trial_primes(300)[1:]


class TestResidueMatrix:
    def test_5_7_17_73_have_no_square(self):
        m = residue_matrix([5, 7, 17, 73])
        off = [m.entries[i][j] for i in range(4) for j in range(4) if i != j]
        assert off == [-1] * 12
        assert not m.has_nonzero_square()

    def test_three_seven(self):
        m = residue_matrix([3, 7])
        assert m.entries == ((0, -1), (1, 0))
        assert m.has_nonzero_square()

    def test_single_prime(self):
        m = residue_matrix([5])
        assert m.entries == ((0,),)
        assert not m.has_nonzero_square()

    def test_duplicates(self):
        with pytest.raises(DomainError):
            residue_matrix([5, 7, 5])

    @given(st.lists(st.sampled_from(ODD_PRIMES), min_size=1, max_size=6, unique=True))
    def test_entries_match_square_enumeration(self, primes):
        m = residue_matrix(primes)
        for i, p in enumerate(primes):
            for j, q in enumerate(primes):
                assert m.entries[i][j] == (0 if i == j else brute_legendre(p, q))


class TestTheorem1:
    def test_all_residues_mod_29_rejected(self):
        v = theorem1_filter(parse_shape("5^2*13^2*53^2@29^odd"))
        assert v.outcome is Outcome.REJECT
        assert v.witness == {"modulus": 29, "symbols": {5: 1, 13: 1, 53: 1}}
        for p, s in v.witness["symbols"].items():
            assert brute_legendre(p, 29) == s

    def test_adding_three_passes(self):
        v = theorem1_filter(parse_shape("3^2*5^2*13^2*53^2@29"))
        assert v.outcome is Outcome.PASS
        assert brute_legendre(3, 29) == -1

    def test_not_applicable(self):
        v = theorem1_filter(parse_shape("5^2*13^2@17"))
        assert v.outcome is Outcome.INCONCLUSIVE
        assert v.reason.startswith("not applicable")
        assert not v.undecided


class TestTheorem2:
    def test_no_square_among_5_7_17_73_rejected(self):
        v = theorem2_filter(parse_shape("5^even*7^even*17^even@73^odd"))
        assert v.outcome is Outcome.REJECT
        m = v.witness["matrix"]
        assert m["primes"] == [5, 7, 17, 73]
        assert sum(x == -1 for row in m["entries"] for x in row) == 12

    def test_passes_with_a_square(self):
        v = theorem2_filter(parse_shape("3^2*7^2*11^2@17"))
        assert v.outcome is Outcome.PASS
        assert brute_legendre(11, 7) == 1

    def test_not_applicable(self):
        v = theorem2_filter(parse_shape("5^2*13^2@29"))
        assert v.outcome is Outcome.INCONCLUSIVE


class TestSupport:
    def test_foreign_prime_seven(self):
        v = support_filter(parse_shape("3^2@13^1"))
        assert v.outcome is Outcome.REJECT
        assert v.witness["foreign_primes"] == [7]
        assert trial_factor(v.witness["sigma"]) == {2: 1, 7: 1}

    def test_foreign_prime_three(self):
        v = support_filter(parse_shape("5^2*13^2*53^2@29^1"))
        assert v.witness["foreign_primes"] == [3]
        assert v.witness["prime_power"] == "29^1"

    def test_wrong_two_adic_valuation(self):
        # sigma(29^3) = 30 * 842 is divisible by 4
        v = support_filter(parse_shape("5^2*13^2@29^3"))
        assert v.outcome is Outcome.REJECT
        assert v.witness["two_adic_valuation"] >= 2
        assert v.witness["expected_valuation"] == 1

    def test_square_sigma_is_odd(self):
        assert sigma_prime_power(3, 2) == 13
        v = support_filter(parse_shape("3^2*13^2@5^1"))
        # sigma(5) = 6 = 2*3 and sigma(3^2) = 13; only sigma(13^2) = 183 = 3*61 is foreign
        assert v.witness["foreign_primes"] == [61]

    def test_needs_exact_exponents(self):
        with pytest.raises(UsageError):
            support_filter(parse_shape("3^even*13^2@5"))

    def test_budget_exhaustion_is_undecided(self):
        # sigma(q) = 2 * 10000121 * 10004399 and each sigma(p^2) is a product of
        # two primes above 10^6, so a budget of 1 cannot split anything
        shape = parse_shape("10000121^2*10004399^2@200090401064557")
        v = support_filter(shape, budget=1)
        assert v.outcome is Outcome.INCONCLUSIVE and v.undecided
        assert v.witness["cofactor"] == 10000121 * 10004399
        v = support_filter(shape)
        assert v.rejected
        assert v.witness["foreign_primes"] == [8208859, 12182257]
        assert 8208859 * 12182257 == 10000121**2 + 10000121 + 1


class TestParityCertificate:
    def test_special_twenty_nine(self):
        e = parity_entry(29, 1)
        assert e.sigma == 30
        assert e.symbols == {3: -1, 5: 1}
        assert e.parity == 1 == e.expected_parity
        assert legendre_two(29) == -1

    def test_three_squared(self):
        e = parity_entry(3, 2)
        assert e.sigma == 13 and e.symbols == {13: 1} and e.parity == 0

    def test_zero_exponent(self):
        e = parity_entry(7, 0)
        assert e.sigma == 1 and e.symbols == {} and e.parity == 0 and e.complete

    def test_certificate_over_shape(self):
        cert = parity_certificate(parse_shape("3^2@29^1"))
        assert cert.complete and cert.contradictions == []
        assert [e.prime for e in cert.entries] == [3, 29]

    def test_incomplete_entry(self):
        e = parity_entry(1000003, 21, budget=0)
        assert not e.complete
        assert e.to_dict()["status"] == "inconclusive"

    def test_never_a_contradiction(self):
        # Every p < 300 and a <= 12.  Entries the default budget cannot finish
        # must leave a composite cofactor; all finished entries must agree.
        unfinished = []
        for p in ODD_PRIMES:
            for a in range(13):
                e = parity_entry(p, a)
                if not e.complete:
                    assert not is_prime(e.cofactor)
                    unfinished.append((p, a))
                    continue
                assert e.consistent, (p, a)
                s = sum(p**i for i in range(a + 1))
                if s < 10**12:
                    odd = [r for r, k in trial_factor(s).items() if r != 2 and k % 2]
                    assert e.symbols == {r: brute_legendre(r, p) for r in odd}
        assert len(unfinished) <= 2, unfinished


class TestGrammar:
    @pytest.mark.parametrize(
        "text",
        ["5^2*13^2*53^2@29^odd", "3^2*5^2*13^2@29^1", "5^even*13^2@29^3", "@13^1", "3^2@13^odd"],
    )
    def test_round_trip(self, text):
        assert str(parse_shape(text)) == text

    def test_bare_special_means_exponent_one(self):
        assert parse_shape("3^2@13").special_exponent == 1

    @pytest.mark.parametrize(
        "text, position",
        [("3^2*13^2", 8), ("3^2@13@5", 6), ("3@13", 0), ("3^3@13", 0), ("9^2@13", 0),
         ("3^2*3^2@13", 4), ("5^2*3^2@13", 4), ("3^2@13^2", 4), ("3^2@15", 4),
         ("3^2@3", 4), ("3^2@13*5", 7)],
    )
    def test_errors_are_positioned(self, text, position):
        with pytest.raises(GrammarError) as info:
            parse_shape(text)
        assert info.value.position == position

    def test_shape_invariants(self):
        with pytest.raises(DomainError):
            ShapeSpec((3, 5), 5)
        with pytest.raises(DomainError):
            ShapeSpec((3, 2), 5)
        with pytest.raises(DomainError):
            ShapeSpec((3,), 5, (3,))
        with pytest.raises(DomainError):
            ShapeSpec((3,), 5, (2,), 2)

    def test_exactness(self):
        assert parse_shape("3^2@13").exact
        assert not parse_shape("3^even@13").exact
        assert not parse_shape("3^2@13^odd").exact
        assert parse_shape("3^2*7^4@13^5").to_factorization().as_dict() == {3: 2, 7: 4, 13: 5}


@st.composite
def shapes(draw, exact=None):
    primes = draw(st.lists(st.sampled_from(ODD_PRIMES), min_size=2, max_size=6, unique=True))
    special, even = primes[0], primes[1:]
    if exact is None:
        exact = draw(st.booleans())
    if exact:
        exps = [2 * draw(st.integers(1, 4)) for _ in even]
        b = 2 * draw(st.integers(0, 4)) + 1
    else:
        exps = [None] * len(even)
        b = None
    return ShapeSpec(tuple(even), special, tuple(exps), b)


@given(shapes())
@settings(max_examples=500)
def test_soundness_gate(shape):
    v1, v2 = theorem1_filter(shape), theorem2_filter(shape)
    if v1.rejected:
        assert shape.special % 8 == 5
    if v2.rejected:
        assert shape.special % 8 == 1
    if shape.special % 8 not in (1, 5):
        assert v1.outcome is v2.outcome is Outcome.INCONCLUSIVE


@given(shapes(exact=True), st.data())
@settings(max_examples=300)
def test_exponent_independence(shape, data):
    even = [e + 2 * data.draw(st.integers(0, 5)) for e in shape.even_exponents]
    b = shape.special_exponent + 2 * data.draw(st.integers(0, 5))
    mutated = shape.with_exponents(even, b)
    stripped = ShapeSpec(shape.even_part, shape.special)
    for f in (theorem1_filter, theorem2_filter):
        assert f(shape) == f(mutated) == f(stripped)


@given(shapes())
@settings(max_examples=300)
def test_rejection_witnesses_revalidate(shape):
    v1 = theorem1_filter(shape)
    if v1.rejected:
        q = v1.witness["modulus"]
        assert set(v1.witness["symbols"]) == set(shape.even_part)
        assert all(brute_legendre(p, q) == 1 for p in shape.even_part)
    v2 = theorem2_filter(shape)
    if v2.rejected:
        ps = v2.witness["matrix"]["primes"]
        assert sorted(ps) == sorted(shape.primes)
        assert all(brute_legendre(a, b) == -1 for a in ps for b in ps if a != b)


def test_reciprocity_corollary_forces_theorem2_pass():
    threes = [p for p in trial_primes(2000) if p % 4 == 3]
    for i, p1 in enumerate(threes):
        for p2 in threes[i + 1 :]:
            assert sorted((brute_legendre(p1, p2), brute_legendre(p2, p1))) == [-1, 1]
    # any shape whose even part has two such primes passes when applicable
    for q in (17, 41, 73, 89, 97):
        assert theorem2_filter(ShapeSpec((3, 7), q)).outcome is Outcome.PASS


def test_euler_form_filter():
    assert euler_form_filter(parse_shape("5^2*13^2*53^2@29^odd")).outcome is Outcome.PASS
    v = euler_form_filter(parse_shape("5^2@29"))
    assert v.rejected and "L6" in v.witness["violated"]
    v = euler_form_filter(parse_shape("5^2*13^2@31"))
    assert v.rejected and "L5" in v.witness["violated"]
    v = euler_form_filter(parse_shape("5^2*13^2@29^3"))
    assert v.rejected and "L4" in v.witness["violated"]


def test_apply_criterion():
    shape = parse_shape("5^even*13^even*53^even@29^odd")
    assert list(CRITERIA) == ["euler_form", "theorem1", "theorem2", "support", "parity_certificate"]
    assert apply_criterion("theorem1", shape).rejected
    assert apply_criterion("support", shape).reason.startswith("not applicable")
    with pytest.raises(UsageError):
        apply_criterion("theorem3", shape)
