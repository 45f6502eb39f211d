import os
import tempfile
import unittest

from manyval.builtin_matrices import build_builtin
from manyval.congruence import enumerate_congruences, factor_matrix
from manyval.errors import ForeignPartitionError, LogicSpecError, SourceError
from manyval.formula import Atom, Compound, conj, disj, neg
from manyval.logic_formatter import serialize_logic
from manyval.logic_parser import load_logic, parse_formula, parse_logic, parse_partition, parse_valuation

CL_SPEC = """
# classical two-valued logic
logic "CL".
values: f, t.
designated: t.

op neg/1 {
  f -> t.
  t -> f.
}

op and/2 {
  (f, f) -> f. (f, t) -> f.
  (t, f) -> f. (t, t) -> t.
}

op or/2 {
  (f, f) -> f.
  (f, t) -> t.   # comments may follow entries
  (t, f) -> t.
  (t, t) -> t.
}
"""


class TestParseLogic(unittest.TestCase):
    def test_parse_cl(self):
        """A hand-written spec yields the builtin classical matrix"""
        m = parse_logic(CL_SPEC)
        self.assertEqual(m.name, "CL")
        self.assertEqual(m, build_builtin("cl2"))

    def test_serialized_builtins_reparse(self):
        """Serialized matrices parse back to equal matrices"""
        for name in ["nc", "fc", "kw3"]:
            with self.subTest(name=name):
                m = build_builtin(name)
                parsed = parse_logic(serialize_logic(m))
                self.assertEqual(parsed, m)
                self.assertEqual(parsed.name, m.name)

    def test_factor_value_names_reparse(self):
        """Class names joined with a middle dot are legal value names"""
        fc = build_builtin("fc")
        factor, _ = factor_matrix(fc, enumerate_congruences(fc, blocks=9)[0])
        self.assertEqual(parse_logic(serialize_logic(factor)), factor)

    def test_load_logic(self):
        """Files are read as UTF-8"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cl.mvl")
            with open(path, "w", encoding="utf-8") as f:
                f.write(CL_SPEC)
            self.assertEqual(load_logic(path), build_builtin("cl2"))

    def test_load_logic_not_utf8(self):
        """Undecodable bytes are reported with their position"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "latin.mvl")
            with open(path, "wb") as f:
                f.write(b'logic "CL".\nvalues: f, t\xff.\n')
            with self.assertRaises(SourceError) as cm:
                load_logic(path)
        self.assertEqual((cm.exception.line, cm.exception.column), (2, 13))
        self.assertIn("0xff", str(cm.exception))

    def test_syntax_error_position(self):
        """Syntax errors carry the line of the offending input"""
        with self.assertRaises(SourceError) as cm:
            parse_logic('logic "X".\nvalues: a b.\n')
        self.assertEqual(cm.exception.line, 2)
        self.assertNotIsInstance(cm.exception, LogicSpecError)

    def test_value_name_characters(self):
        """Separator characters cannot occur in value names, a lone hyphen can"""
        m = parse_logic('logic "V".\nvalues: a-b, t+, 1/2.\ndesignated: t+.\n')
        self.assertEqual(m.values, ("a-b", "t+", "1/2"))
        for bad in ["a:b", "a|b", "a#b", 'a"b', "a->b"]:
            with self.subTest(value=bad):
                with self.assertRaises(SourceError):
                    parse_logic(f'logic "V".\nvalues: {bad}, t.\ndesignated: t.\n')

    def test_all_semantic_errors_reported(self):
        """Every semantic issue is collected before raising"""
        text = 'logic "Bad".\nvalues: a, b, a.\ndesignated: c.\nop neg/1 {\n  a -> b.\n}\n'
        with self.assertRaises(LogicSpecError) as cm:
            parse_logic(text)
        messages = cm.exception.messages
        self.assertIn("duplicate value a", messages)
        self.assertIn("designated value c not declared", messages)
        self.assertIn("op neg/1: missing entry (b)", messages)
        lines = {msg: line for line, _, msg in cm.exception.issues}
        self.assertEqual(lines["duplicate value a"], 2)
        self.assertEqual(lines["designated value c not declared"], 3)
        self.assertIn("(and 2 more)", str(cm.exception))

    def test_designation_errors(self):
        """Empty and total designated sets are rejected"""
        base = 'logic "D".\nvalues: a, b.\n'
        with self.assertRaises(LogicSpecError) as cm:
            parse_logic(base + "designated: .\n")
        self.assertEqual(cm.exception.messages, ["designated set empty"])
        with self.assertRaises(LogicSpecError) as cm:
            parse_logic(base + "designated: a, b.\n")
        self.assertEqual(cm.exception.messages, ["no undesignated value"])

    def test_entry_errors(self):
        """Conflicting entries, undeclared values and wrong argument counts"""
        head = 'logic "E".\nvalues: a, b.\ndesignated: a.\n'
        cases = [
            ("op neg/1 {\n a -> b.\n a -> a.\n b -> a.\n}\n", "op neg/1: conflicting entries for (a): b and a"),
            ("op neg/1 {\n a -> c.\n b -> a.\n}\n", "op neg/1: value c not declared"),
            ("op neg/1 {\n (a, b) -> a.\n a -> a.\n b -> a.\n}\n", "op neg/1: entry has 2 arguments, expected 1"),
            ("op neg/1 {\n a -> b.\n b -> a.\n}\nop neg/1 {\n a -> b.\n b -> a.\n}\n", "duplicate operation neg/1"),
        ]
        for body, expected in cases:
            with self.subTest(expected=expected):
                with self.assertRaises(LogicSpecError) as cm:
                    parse_logic(head + body)
                self.assertIn(expected, cm.exception.messages)

    def test_repeated_equal_entry_is_accepted(self):
        """An entry repeated with the same output only warns"""
        text = 'logic "R".\nvalues: a, b.\ndesignated: a.\nop neg/1 {\n a -> b.\n a -> b.\n b -> a.\n}\n'
        with self.assertLogs("manyval.logic_parser", level="WARNING"):
            m = parse_logic(text)
        self.assertEqual(m.size, 2)

    def test_missing_clause(self):
        """A spec without a values clause is rejected"""
        with self.assertRaises(LogicSpecError) as cm:
            parse_logic('logic "M".\ndesignated: a.\n')
        self.assertIn("missing values clause", cm.exception.messages)


class TestParseFormula(unittest.TestCase):
    def setUp(self):
        self.A, self.B, self.C = Atom("A"), Atom("B"), Atom("C")

    def test_precedence(self):
        """~ binds tighter than &, & tighter than |"""
        A, B, C = self.A, self.B, self.C
        self.assertEqual(parse_formula("A & B | ~C"), disj(conj(A, B), neg(C)))
        self.assertEqual(parse_formula("A & (B | C)"), conj(A, disj(B, C)))
        self.assertEqual(parse_formula("~~A"), neg(neg(A)))
        self.assertEqual(parse_formula("~(A & B)"), neg(conj(A, B)))

    def test_left_associative(self):
        """Binary operators fold to the left"""
        A, B, C = self.A, self.B, self.C
        self.assertEqual(parse_formula("A | B | C"), disj(disj(A, B), C))
        self.assertEqual(parse_formula("A & B & C"), conj(conj(A, B), C))

    def test_call_syntax(self):
        """Operations without a symbol use call syntax"""
        self.assertEqual(parse_formula("imp(A, B)"), Compound("imp", (self.A, self.B)))
        self.assertEqual(parse_formula("and(A, ~B)"), conj(self.A, neg(self.B)))

    def test_syntax_errors(self):
        """Incomplete formulas raise SourceError"""
        for text in ["A &", "(A | B", "A B", "", "~"]:
            with self.subTest(text=text):
                with self.assertRaises(SourceError):
                    parse_formula(text)


class TestParsePartitionAndValuation(unittest.TestCase):
    def setUp(self):
        self.cl = build_builtin("cl2")

    def test_partition(self):
        """Blocks are canonicalized"""
        p = parse_partition("{t|f}", self.cl)
        self.assertEqual(p.blocks, (("f",), ("t",)))

    def test_partition_must_cover(self):
        """Partitions must cover every value exactly once"""
        for text in ["{f}", "{f|t|f}", "{f|u}"]:
            with self.subTest(text=text):
                with self.assertRaises(ForeignPartitionError):
                    parse_partition(text, self.cl)

    def test_valuation(self):
        """Valuations are comma-separated assignments"""
        self.assertEqual(parse_valuation("A=tf, B=ff"), {"A": "tf", "B": "ff"})
        with self.assertRaises(SourceError):
            parse_valuation("A")


if __name__ == '__main__':
    unittest.main()
