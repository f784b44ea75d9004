import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakfan import corpus as C
from weakfan.cones import make_cone
from weakfan.linalg import GaussRat, Matrix, Subspace
from weakfan.limits import certify_orbit_pair, grading_element, weight_filtration
from weakfan.serialize import (
    SchemaError,
    canonical_json,
    decode_cone,
    decode_flag,
    decode_group_element,
    decode_lattice,
    decode_matrix,
    decode_rational,
    decode_scalar,
    decode_session,
    decode_splitting,
    decode_subspace,
    decode_weight,
    digest,
    encode_cone,
    encode_flag,
    encode_group_element,
    encode_lattice,
    encode_matrix,
    encode_rational,
    encode_scalar,
    encode_session,
    encode_splitting,
    encode_subspace,
    encode_weight,
    load_session,
)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


class TestScalars:
    @given(fractions)
    def test_rational_round_trip(self, x):
        s = encode_rational(x)
        assert decode_rational(s) == x
        p, q = s.split("/")
        assert int(q) > 0 and Fraction(int(p), int(q)) == x

    @given(fractions, fractions)
    def test_gaussian_round_trip(self, re, im):
        z = GaussRat(re, im)
        assert decode_scalar(encode_scalar(z)) == z

    def test_normalized(self):
        assert encode_rational(Fraction(6, -4)) == "-3/2"
        assert encode_rational(0) == "0/1"

    @pytest.mark.parametrize("bad", ["1/0", "a/2", "1/2/3", 1.5, None, True, [1]])
    def test_malformed(self, bad):
        with pytest.raises(SchemaError):
            decode_rational(bad, "$.x")

    def test_zero_denominator_path(self):
        with pytest.raises(SchemaError) as info:
            decode_matrix({"entries": [["1/1", "0/1"], ["1/0", "1/1"]]}, "$.nilpotents.N")
        assert info.value.path == "$.nilpotents.N.entries[1][0]"

    def test_unknown_scalar_keys(self):
        with pytest.raises(SchemaError):
            decode_scalar({"re": "1/1", "imag": "1/1"})


class TestValues:
    def test_matrix(self):
        m = Matrix([[Fraction(1, 2), -3], [GaussRat(0, 1), 0]])
        assert decode_matrix(encode_matrix(m)) == m

    def test_matrix_shape(self):
        with pytest.raises(SchemaError):
            decode_matrix(encode_matrix(Matrix.identity(2)), "$", (3, 3))
        with pytest.raises(SchemaError):
            decode_matrix({"entries": [["1"], ["1", "2"]]})

    def test_subspace(self):
        s = Subspace.span([(1, GaussRat(0, 1), 0), (0, 0, Fraction(2, 3))], 3)
        assert decode_subspace(encode_subspace(s)) == s

    def test_lattice_flag_cone_group(self):
        L = C.siegel_lattice()
        assert decode_lattice(encode_lattice(L)) == L
        for f in (C.siegel_flag(), C.siegel_flag().transform(C.levi(C.SIEGEL_SHEAR))):
            assert decode_flag(encode_flag(f), L) == f
        for c in (C.siegel_sigma(), C.siegel_tau()):
            assert decode_cone(encode_cone(c), L) == c
        g = C.siegel_generators()[2] * C.siegel_generators()[0]
        back = decode_group_element(encode_group_element(g), L)
        assert back == g and back.word == g.word

    def test_weight_and_splitting(self):
        w = weight_filtration(C.weight2_nilpotent()).shifted(2)
        assert decode_weight(encode_weight(w)) == w
        elliptic = make_cone(C.elliptic_lattice(), [C.elliptic_nilpotent()])
        for sigma, F in [(C.siegel_sigma(), C.siegel_flag()), (C.siegel_tau(), C.siegel_flag()),
                         (elliptic, C.elliptic_twisted_flag())]:
            split = certify_orbit_pair(sigma, F).splitting
            back = decode_splitting(encode_splitting(split))
            assert back.as_dict() == split.as_dict()
            assert grading_element(back).Y == grading_element(split).Y

    def test_group_element_must_preserve_form(self):
        with pytest.raises(SchemaError):
            decode_group_element(encode_matrix(Matrix.diag([2, 1, 1, 1])), C.siegel_lattice(), "$.g")

    def test_cone_errors_become_schema_errors(self):
        L = C.elliptic_lattice()
        with pytest.raises(SchemaError) as info:
            decode_cone({"generators": [encode_matrix(Matrix.identity(2))]}, L, "$.cones.bad")
        assert info.value.path == "$.cones.bad"
        with pytest.raises(SchemaError):
            decode_cone({"generators": ["nope"]}, L, "$.cones.bad", {})


class TestSessions:
    @pytest.mark.parametrize("name", sorted(C.SESSIONS))
    def test_round_trip(self, name):
        raw = C.SESSIONS[name]()
        s = decode_session(raw)
        again = decode_session(encode_session(s))
        assert again.lattice == s.lattice
        assert again.cones == s.cones and again.nilpotents == s.nilpotents
        assert again.flags == s.flags and again.fan == s.fan
        assert [g.matrix for g in again.generator_list()] == [g.matrix for g in s.generator_list()]

    def test_canonical_json_is_key_order_free(self):
        raw = C.SESSIONS["siegel_overlap"]()
        shuffled = json.loads(json.dumps(raw, sort_keys=False))
        reordered = dict(reversed(list(shuffled.items())))
        assert canonical_json(reordered) == canonical_json(raw)
        assert digest(reordered) == digest(raw)
        assert len(digest(raw)) == 64

    @pytest.mark.parametrize("mutate, path", [
        (lambda s: s.pop("lattice"), "$.lattice"),
        (lambda s: s["fan"]["cones"].append({"cone": "nope", "flag": "F"}), "$.fan.cones[1].cone"),
        (lambda s: s["fan"]["gamma"].append("nope"), "$.fan.gamma[1]"),
        (lambda s: s["fan"].__setitem__("max_word_len", -1), "$.fan.max_word_len"),
        (lambda s: s["nilpotents"]["N"]["entries"][0].__setitem__(1, "1/0"), "$.nilpotents.N.entries[0][1]"),
        (lambda s: s["lattice"].__setitem__("weight", "1"), "$.lattice.weight"),
        (lambda s: s["flags"]["F"]["F"].pop("1"), "$.flags.F.F.1"),
    ])
    def test_schema_paths(self, mutate, path):
        raw = C.SESSIONS["elliptic"]()
        mutate(raw)
        with pytest.raises(SchemaError) as info:
            decode_session(raw)
        assert info.value.path == path

    def test_load_errors(self, tmp_path):
        with pytest.raises(SchemaError):
            load_session(str(tmp_path / "missing.json"))
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        with pytest.raises(SchemaError):
            load_session(str(bad))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=3, max_size=3))
    def test_matrix_property(self, rows):
        m = Matrix(rows)
        enc = encode_matrix(m)
        assert decode_matrix(json.loads(canonical_json(enc))) == m
        assert canonical_json(encode_matrix(decode_matrix(enc))) == canonical_json(enc)
