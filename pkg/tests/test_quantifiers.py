import unittest

from manyval.builtin_matrices import build_builtin
from manyval.errors import MatrixError, NotAciError
from manyval.matrix import make_matrix
from manyval.quantifiers import distribution_table, distribution_tables, is_aci


def _imp(a, b):
    return "t" if a == "f" or b == "t" else "f"


class TestAci(unittest.TestCase):
    def test_builtin_lattice_operations(self):
        """Conjunction and disjunction of the builtins are ACI"""
        for name in ["kw3", "cl2", "nc", "fde", "ac2"]:
            m = build_builtin(name)
            for op in ["and", "or"]:
                with self.subTest(matrix=name, op=op):
                    self.assertTrue(is_aci(m, op))

    def test_failing_laws(self):
        """The first failing law and a witness are reported"""
        m = make_matrix("I", ("f", "t"), ["t"], {
            ("imp", 2): _imp,
            ("first", 2): lambda a, b: a,
        })
        verdict = is_aci(m, "imp")
        self.assertEqual((verdict.law, verdict.witness), ("idempotence", ("f",)))
        verdict = is_aci(m, "first")
        self.assertEqual((verdict.law, verdict.witness), ("commutativity", ("f", "t")))
        self.assertEqual(verdict.message, "commutativity fails at (f, t)")

    def test_associativity(self):
        """An idempotent commutative but non-associative operation"""
        # rock-paper-scissors: each pair yields its winner
        beats = {("r", "s"): "r", ("s", "p"): "s", ("p", "r"): "p"}

        def play(a, b):
            return a if a == b else beats.get((a, b)) or beats[(b, a)]

        m = make_matrix("RPS", ("r", "p", "s"), ["r"], {("play", 2): play})
        verdict = is_aci(m, "play")
        self.assertFalse(verdict)
        self.assertEqual(verdict.law, "associativity")
        with self.assertRaises(NotAciError):
            distribution_table(m, "play")


class TestDistributionTable(unittest.TestCase):
    def setUp(self):
        self.nc = build_builtin("nc")
        self.table = distribution_table(self.nc, "and")

    def test_size(self):
        """One entry per non-empty subset"""
        self.assertEqual(len(self.table), 511)
        self.assertEqual(self.table.quantifier, "forall")

    def test_count_not(self):
        """Subsets of NC folding to something other than uu under conjunction"""
        self.assertEqual(self.table.count_not("uu"), 111)
        with self.assertRaises(MatrixError):
            self.table.count_not("xx")

    def test_values(self):
        """Folds meet the first components and join the second"""
        self.assertEqual(self.table.value_of(["tt", "ft"]), "ft")
        self.assertEqual(self.table.value_of(["tt"]), "tt")
        self.assertEqual(self.table.value_of(["tt", "tf", "ut"]), "ut")
        self.assertEqual(self.table.value_of(["tf", "ft"]), "ft")
        with self.assertRaises(MatrixError):
            self.table.value_of([])

    def test_entries(self):
        """Entries enumerate subsets by bitmask"""
        entries = list(self.table.entries())
        self.assertEqual(len(entries), 511)
        self.assertEqual(entries[0], (("ff",), "ff"))
        self.assertEqual(entries[2], (("ff", "fu"), "fu"))

    def test_both_quantifiers_consistent(self):
        """Counts agree with the entries and singletons fold to themselves"""
        for op in ["and", "or"]:
            table = distribution_table(self.nc, op)
            entries = list(table.entries())
            with self.subTest(op=op):
                self.assertEqual(table.count_not("uu"), sum(1 for _, v in entries if v != "uu"))
                for subset, v in entries:
                    if len(subset) == 1:
                        self.assertEqual(v, subset[0])

    def test_all_tables(self):
        """Tables for every ACI binary operation"""
        tables = distribution_tables(build_builtin("fde"))
        self.assertEqual(sorted(tables), ["and", "or"])
        self.assertEqual(tables["or"].quantifier, "exists")
        self.assertEqual(tables["and"].value_of(["T", "F"]), "F")
        self.assertEqual(tables["or"].value_of(["B", "N"]), "T")


if __name__ == '__main__':
    unittest.main()
