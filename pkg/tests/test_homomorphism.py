import unittest

from manyval.builtin_matrices import build_builtin
from manyval.congruence import enumerate_congruences, factor_matrix
from manyval.errors import ForeignValueError, SignatureMismatchError
from manyval.homomorphism import direct_product, induced_partition, is_strong_homomorphism
from manyval.matrix import make_matrix
from manyval.value_map import ValueMap, compose, identity_map


class TestDirectProduct(unittest.TestCase):
    def test_product_of_classical(self):
        """Pairs are ordered left-major and designated when both parts are"""
        cl = build_builtin("cl2")
        p = direct_product(cl, cl)
        self.assertEqual(p.name, "CLxCL")
        self.assertEqual(p.values, ("ff", "ft", "tf", "tt"))
        self.assertEqual(p.designated, frozenset({"tt"}))

    def test_ambiguous_names_fall_back(self):
        """Concatenated names that collide are joined with an underscore"""
        m1 = make_matrix("M1", ("a", "ab"), ["a"], {("neg", 1): lambda x: x})
        m2 = make_matrix("M2", ("c", "bc"), ["c"], {("neg", 1): lambda x: x})
        p = direct_product(m1, m2)
        self.assertEqual(p.values, ("a_c", "a_bc", "ab_c", "ab_bc"))
        self.assertEqual(p.designated, frozenset({"a_c"}))

    def test_signature_mismatch(self):
        """Products need identical signatures"""
        with self.assertRaises(SignatureMismatchError) as cm:
            direct_product(build_builtin("kw3"), build_builtin("cl2"))
        self.assertIn("neg/1", str(cm.exception))


class TestStrongHomomorphism(unittest.TestCase):
    def setUp(self):
        self.nc = build_builtin("nc")
        self.cl = build_builtin("cl2")
        self.fc = build_builtin("fc")

    def test_identity(self):
        """The identity is a strong homomorphism"""
        self.assertTrue(is_strong_homomorphism(self.nc, self.nc, identity_map(self.nc)))

    def test_designation_checked_first(self):
        """Projecting FC onto FDE breaks designation at Bb"""
        fde = build_builtin("fde")
        f = ValueMap.from_dict(self.fc, fde, {v: v[0] for v in self.fc.values})
        verdict = is_strong_homomorphism(self.fc, fde, f)
        self.assertFalse(verdict)
        self.assertEqual(verdict.violation.kind, "designation")
        self.assertEqual(verdict.violation.values, ("Bb", "B"))

    def test_operation_violation(self):
        """Collapsing NC by its first component does not commute with negation"""
        f = ValueMap.from_dict(self.nc, self.cl, {v: "t" if v[0] == "t" else "f" for v in self.nc.values})
        verdict = is_strong_homomorphism(self.nc, self.cl, f)
        self.assertFalse(verdict)
        self.assertEqual(verdict.violation.kind, "operation")
        self.assertEqual(verdict.violation.op, "neg")
        self.assertEqual(verdict.violation.args, ("ff",))

    def test_partial_maps_rejected(self):
        """Maps must be total and stay inside the target"""
        with self.assertRaises(ForeignValueError):
            ValueMap.from_dict(self.cl, self.cl, {"f": "f"})
        with self.assertRaises(ForeignValueError):
            ValueMap.from_dict(self.cl, self.cl, {"f": "f", "t": "u"})

    def test_induced_partition_of_projection(self):
        """The fibers of a factor projection are the congruence classes"""
        c = enumerate_congruences(self.fc, blocks=9)[0]
        _, projection = factor_matrix(self.fc, c)
        self.assertEqual(induced_partition(self.fc, projection), c.partition)

    def test_compose(self):
        """compose(f, g) applies f first"""
        f = ValueMap.from_dict(self.cl, self.cl, {"f": "t", "t": "f"})
        g = ValueMap.from_dict(self.cl, self.cl, {"f": "f", "t": "f"})
        self.assertEqual(compose(f, g).as_dict(), {"f": "f", "t": "f"})
        self.assertEqual(compose(g, f).as_dict(), {"f": "t", "t": "t"})


if __name__ == '__main__':
    unittest.main()
