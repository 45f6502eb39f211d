import random
import unittest

from manyval.builtin_matrices import build_builtin
from manyval.errors import BudgetExhaustedError, TableauError
from manyval.formula import Atom, conj, disj, formula_pool, neg, random_formula
from manyval.logic_parser import parse_formula
from manyval.search_budget import SearchBudget
from manyval.semantics import entails, evaluate
from manyval.tableau import SignedFormula, Tableau, initial_signed_set, prove_entailment
from manyval.tableau_rules import generate_rules

A, B = Atom("A"), Atom("B")
SIGNATURE = [("neg", 1), ("and", 2), ("or", 2)]


class TestTableau(unittest.TestCase):
    def setUp(self):
        self.cl = build_builtin("cl2")
        self.nc = build_builtin("nc")

    def test_initial_signed_set(self):
        """Premises exclude undesignated signs, the conclusion designated ones"""
        signed = initial_signed_set(self.nc, [A], B)
        self.assertEqual([str(s) for s in signed],
                         ["ff:A", "fu:A", "ft:A", "uf:A", "uu:A", "ut:A", "tf:B", "tu:B", "tt:B"])

    def test_immediate_closure(self):
        """A entails A closes before any expansion"""
        result = prove_entailment(self.cl, generate_rules(self.cl), [A], A)
        self.assertTrue(result.holds)
        self.assertEqual(result.tableau.render(), "f:A\nt:A ×")
        self.assertEqual(result.tableau.to_tree(), ["f:A", False, [["t:A", True, []]]])
        self.assertEqual(result.tableau.stats().expansions, 0)

    def test_classical_proof(self):
        """Conjunction elimination closes every branch"""
        result = prove_entailment(self.cl, generate_rules(self.cl), [conj(A, B)], A)
        self.assertTrue(result)
        self.assertTrue(result.tableau.closed)
        self.assertEqual(result.tableau.open_branches(), [])

    def test_countervaluation_is_genuine(self):
        """An open saturated branch yields a valuation refuting the entailment"""
        test_cases = [
            (["A | B"], "B"),
            ([], "A | ~A"),
        ]
        rules = generate_rules(self.nc)
        for premises, conclusion in test_cases:
            with self.subTest(conclusion=conclusion):
                ps = [parse_formula(p) for p in premises]
                c = parse_formula(conclusion)
                result = prove_entailment(self.nc, rules, ps, c)
                self.assertFalse(result.holds)
                val = result.countervaluation
                for p in ps:
                    self.assertIn(evaluate(self.nc, p, val), self.nc.designated)
                self.assertNotIn(evaluate(self.nc, c, val), self.nc.designated)

    def test_manual_expansion(self):
        """Expanding by hand splits branches and refuses repeats"""
        t = Tableau(self.cl, generate_rules(self.cl), [SignedFormula("t", conj(A, B))])
        t.expand(0)
        self.assertEqual(len(t.branches), 2)
        self.assertEqual(t.stats().nodes, 3)
        with self.assertRaises(TableauError):
            t.expand(0)
        with self.assertRaises(TableauError):
            t.expand(1)
        with self.assertRaises(TableauError):
            t.expand(7)

    def test_empty_tableau(self):
        """A tableau needs a root"""
        with self.assertRaises(TableauError):
            Tableau(self.cl, generate_rules(self.cl), [])

    def test_budget(self):
        """Proof search respects the node budget"""
        f = disj(conj(A, B), neg(disj(A, neg(B))))
        with self.assertRaises(BudgetExhaustedError):
            prove_entailment(self.nc, generate_rules(self.nc), [f], conj(B, A), SearchBudget(max_nodes=1))


class TestProverAgreesWithTruthTables(unittest.TestCase):
    def _check(self, m, premises, conclusion, rules):
        proved = prove_entailment(m, rules, premises, conclusion)
        expected = entails(m, premises, conclusion)
        self.assertEqual(proved.holds, expected.holds)
        if not proved.holds:
            val = proved.countervaluation
            for p in premises:
                self.assertIn(evaluate(m, p, val), m.designated)
            self.assertNotIn(evaluate(m, conclusion, val), m.designated)

    def test_exhaustive_shallow_pool(self):
        """Every single-premise entailment between formulas of depth at most one"""
        pool = formula_pool(["A", "B"], 1, SIGNATURE)
        for name in ["cl2", "fde", "ac2"]:
            m = build_builtin(name)
            rules = generate_rules(m)
            for p in pool:
                for c in pool:
                    with self.subTest(matrix=name, premise=str(p), conclusion=str(c)):
                        self._check(m, [p], c, rules)

    def test_random_formulas(self):
        """Seeded random entailments of depth two over three atoms"""
        rng = random.Random(20240611)
        for name in ["cl2", "fde", "ac2"]:
            m = build_builtin(name)
            rules = generate_rules(m)
            for _ in range(25):
                premises = [random_formula(rng, ["A", "B", "C"], 2, SIGNATURE) for _ in range(rng.randint(0, 2))]
                conclusion = random_formula(rng, ["A", "B", "C"], 2, SIGNATURE)
                with self.subTest(matrix=name, premises=list(map(str, premises)), conclusion=str(conclusion)):
                    self._check(m, premises, conclusion, rules)

    def test_random_deep_formulas(self):
        """Seeded random entailments of depth three on NC and FDE"""
        rng = random.Random(7919)
        for name in ["nc", "fde"]:
            m = build_builtin(name)
            rules = generate_rules(m)
            for _ in range(15):
                premises = [random_formula(rng, ["A", "B"], 3, SIGNATURE) for _ in range(rng.randint(0, 1))]
                conclusion = random_formula(rng, ["A", "B"], 3, SIGNATURE)
                with self.subTest(matrix=name, premises=list(map(str, premises)), conclusion=str(conclusion)):
                    self._check(m, premises, conclusion, rules)


if __name__ == '__main__':
    unittest.main()
