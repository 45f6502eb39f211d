import unittest

from manyval.builtin_matrices import (
    BUILTIN_NAMES, SevenValuedSpec, build_builtin, build_seven_valued, h_projection, resolve_reference,
    seven_valued_specs,
)
from manyval.errors import UnknownMatrixError
from manyval.matrix import apply_op, validate_matrix


class TestBuiltinMatrices(unittest.TestCase):
    def setUp(self):
        self.nc = build_builtin("nc")
        self.fc = build_builtin("fc")

    def test_nc(self):
        """NC pairs weak Kleene values, designated when the first component is t"""
        self.assertEqual(self.nc.values, ("ff", "fu", "ft", "uf", "uu", "ut", "tf", "tu", "tt"))
        self.assertEqual(self.nc.designated_in_order, ["tf", "tu", "tt"])
        self.assertEqual(apply_op(self.nc, "neg", ["tf"]), "ft")
        self.assertEqual(apply_op(self.nc, "and", ["tf", "ut"]), "ut")
        self.assertEqual(apply_op(self.nc, "or", ["tf", "ft"]), "tf")

    def test_nc_second_component(self):
        """The second component of conjunction is a join, of disjunction a meet"""
        test_cases = [
            # op, left, right, value
            ("and", "ff", "ft", "ft"),
            ("and", "ut", "uf", "ut"),
            ("and", "tf", "ft", "ft"),
            ("and", "tu", "ff", "fu"),
            ("or", "ff", "ft", "ff"),
            ("or", "tt", "ff", "tf"),
            ("or", "uf", "tt", "uf"),
        ]
        for op, a, b, expected in test_cases:
            with self.subTest(op=op, args=(a, b)):
                self.assertEqual(apply_op(self.nc, op, [a, b]), expected)

    def test_kw3_has_no_negation(self):
        """Weak Kleene logic is given with conjunction and disjunction only"""
        kw = build_builtin("kw3")
        self.assertEqual(kw.signature, frozenset({("and", 2), ("or", 2)}))
        self.assertEqual(apply_op(kw, "or", ["t", "u"]), "u")

    def test_fc_is_product(self):
        """FC is FDE x AC2 with designated pairs of designated components"""
        self.assertEqual(self.fc.name, "FC")
        self.assertEqual(self.fc.size, 16)
        self.assertEqual(self.fc.values[:4], ("Bb", "Bt", "Bf", "Bn"))
        self.assertEqual(self.fc.designated, frozenset({"Bf", "Bn", "Tf", "Tn"}))
        self.assertEqual(apply_op(self.fc, "neg", ["Tt"]), "Ff")
        self.assertEqual(apply_op(self.fc, "and", ["Tb", "Nt"]), "Nb")

    def test_builtins_cached(self):
        """Repeated builds return the same instance"""
        for name in BUILTIN_NAMES:
            with self.subTest(name=name):
                self.assertIs(build_builtin(name), build_builtin(name))

    def test_unknown_builtin(self):
        """Unknown names list the available builtins"""
        with self.assertRaises(UnknownMatrixError) as cm:
            build_builtin("lp")
        self.assertIn("kw3", str(cm.exception))
        with self.assertRaises(UnknownMatrixError):
            resolve_reference("nc")

    def test_seven_valued_specs(self):
        """Sixteen candidates, unstarred first"""
        specs = seven_valued_specs()
        self.assertEqual(len(specs), 16)
        self.assertEqual(specs[0].name, "FC_Bb")
        self.assertEqual(specs[8].name, "FC*_Bb")
        self.assertEqual(len({s.name for s in specs}), 16)
        for spec in specs:
            with self.subTest(spec=spec.code):
                m = build_seven_valued(spec)
                self.assertEqual(m.size, 7)
                self.assertTrue(validate_matrix(m).ok)

    def test_spec_parse(self):
        """Codes parse with an optional trailing star"""
        self.assertEqual(SevenValuedSpec.parse("Bt*"), SevenValuedSpec("B", "t", True))
        self.assertEqual(SevenValuedSpec.parse("Tn").code, "Tn")
        for bad in ["Qt", "Bx", "B", "Btt*"]:
            with self.subTest(code=bad):
                with self.assertRaises(UnknownMatrixError):
                    SevenValuedSpec.parse(bad)

    def test_h_projection(self):
        """Pairs outside the differentiated FDE value take the dominant AC2 value"""
        spec = SevenValuedSpec("T", "f")
        self.assertEqual(h_projection(spec, "Tt"), "Tt")
        self.assertEqual(h_projection(spec, "Bn"), "Bf")
        self.assertEqual(h_projection(spec, "Nb"), "Nf")

    def test_starred_designation(self):
        """Starred variants adjust the designation of the other FDE value paired with v"""
        tf = resolve_reference("builtin:fc7:Tf")
        tf_star = resolve_reference("builtin:fc7:Tf*")
        tb_star = resolve_reference("builtin:fc7:Tb*")
        self.assertEqual(tf.values, ("Bf", "Tb", "Tt", "Tf", "Tn", "Ff", "Nf"))
        self.assertEqual(tf.designated_in_order, ["Bf", "Tf", "Tn"])
        self.assertEqual(tf_star.designated_in_order, ["Tf", "Tn"])
        self.assertEqual(tb_star.designated_in_order, ["Bb", "Tf", "Tn"])
        self.assertEqual(tf_star.name, "FC*_Tf")

    def test_seven_valued_operations(self):
        """Operations are the FC ones followed by the projection"""
        m = resolve_reference("builtin:fc7:Tf")
        self.assertEqual(apply_op(m, "neg", ["Tf"]), "Ff")
        self.assertEqual(apply_op(m, "neg", ["Ff"]), "Tt")


if __name__ == '__main__':
    unittest.main()
