import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, NoReturn, Optional, Sequence

from dotenv import load_dotenv

from .builtin_matrices import BUILTIN_PREFIX, build_seven_valued, resolve_reference, seven_valued_specs
from .census import pairwise_isomorphic, seven_valued_census
from .congruence import Congruence, enumerate_congruences, factor_matrix, verify_congruence
from .errors import BudgetExhaustedError, LogicSpecError, ManyvalError
from .homomorphism import direct_product
from .isomorphism import automorphisms, find_epimorphisms, find_isomorphism
from .latex_report import emit_latex_rules, emit_latex_tables
from .logic_formatter import LogicFormatter, partition_to_list
from .logic_parser import load_logic, parse_formula, parse_partition, parse_valuation
from .matrix import Matrix, validate_matrix
from .quantifiers import distribution_table
from .search_budget import DEFAULT_BUDGET_SECS, SearchBudget
from .search_stats import search_space_stats
from .semantics import DEFAULT_ATOM_CAP, EntailmentVerdict, entails, evaluate, find_tautologies, is_tautology
from .tableau import prove_entailment
from .tableau_rules import generate_rules
from .value_map import ValueMap

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4

ENV_BUDGET = "MANYVAL_BUDGET_SECS"
ENV_ATOM_CAP = "MANYVAL_ATOM_CAP"
ENV_JOBS = "MANYVAL_JOBS"


class UsageError(Exception):
    pass


# ---------- configuration ----------

def _env_number(name: str, default, kind):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = kind(raw)
    except ValueError:
        raise UsageError(f"{name} must be a number, got {raw!r}") from None
    if value <= 0:
        raise UsageError(f"{name} must be positive, got {raw!r}")
    return value


@dataclass
class CliConfig:
    budget_secs: float = DEFAULT_BUDGET_SECS
    atom_cap: int = DEFAULT_ATOM_CAP
    jobs: int = 1

    @classmethod
    def from_env(cls) -> "CliConfig":
        return cls(
            budget_secs=_env_number(ENV_BUDGET, DEFAULT_BUDGET_SECS, float),
            atom_cap=_env_number(ENV_ATOM_CAP, DEFAULT_ATOM_CAP, int),
            jobs=_env_number(ENV_JOBS, 1, int),
        )


# ---------- output ----------

class Output:
    """Human text by default; with --json one JSON object per line."""

    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: Optional[str], **facts) -> None:
        if self.as_json:
            if facts:
                print(json.dumps(facts, ensure_ascii=False))
        elif text is not None:
            print(text)


def load_matrix(ref: str) -> Matrix:
    """Builtin references resolve before file paths."""
    if ref.startswith(BUILTIN_PREFIX):
        return resolve_reference(ref)
    return load_logic(ref)


def _budget(args) -> SearchBudget:
    return SearchBudget(seconds=args.budget)


def _map_facts(f: ValueMap) -> Dict:
    return {"source": f.source, "target": f.target, "kind": f.kind, "map": dict(f.pairs)}


def _verdict_text(v: EntailmentVerdict) -> str:
    if v.holds:
        return f"holds ({v.valuations_checked} valuations checked)"
    return f"fails\ncountervaluation: {LogicFormatter.format_valuation(v.countervaluation)}"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("Wrote %s", path)


# ---------- verbs ----------

def cmd_show(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    out.emit(LogicFormatter.describe_matrix(m), verb="show", **LogicFormatter.matrix_to_dict(m))
    return EXIT_OK


def cmd_validate(args, out: Output) -> int:
    try:
        m = load_matrix(args.matrix)
    except LogicSpecError as e:
        for line, col, msg in e.issues:
            out.emit(f"error: {line}:{col}: {msg}", verb="validate", severity="error",
                     line=line, column=col, message=msg)
        return EXIT_NEGATIVE
    report = validate_matrix(m)
    for issue in report.issues:
        out.emit(f"{issue.severity}: {issue.message}", verb="validate", severity=issue.severity,
                 message=issue.message, location=issue.location)
    out.emit(f"{m.name}: {'ok' if report.ok else 'invalid'}", verb="validate", matrix=m.name, ok=report.ok)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_product(args, out: Output) -> int:
    m = direct_product(load_matrix(args.left), load_matrix(args.right), name=args.name)
    text = LogicFormatter.serialize_logic(m)
    if args.output:
        _write(args.output, text)
        out.emit(f"{m.name}: {m.size} values written to {args.output}", verb="product",
                 matrix=m.name, values=m.size, output=args.output)
    else:
        out.emit(text.rstrip("\n"), verb="product", **LogicFormatter.matrix_to_dict(m))
    return EXIT_OK


def _congruences(m: Matrix, args, include_identity: bool) -> List[Congruence]:
    return enumerate_congruences(m, include_identity=include_identity, limit=args.limit,
                                 budget=_budget(args), blocks=args.blocks, jobs=args.jobs)


def cmd_congruences(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    found = _congruences(m, args, args.include_identity)
    for c in found:
        out.emit(LogicFormatter.format_partition(c.partition), verb="congruences",
                 classes=len(c), blocks=partition_to_list(c.partition))
    return EXIT_OK if found else EXIT_NEGATIVE


def _classes(m: Matrix, spec: str, args) -> Congruence:
    """A partition literal, or the 1-based position in the congruence listing."""
    if spec.strip().isdigit():
        found = _congruences(m, args, include_identity=False)
        pos = int(spec)
        if not 1 <= pos <= len(found):
            raise UsageError(f"{m.name} has {len(found)} non-identity congruences, no number {pos}")
        return found[pos - 1]
    return verify_congruence(m, parse_partition(spec, m))


def cmd_factor(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    factor, projection = factor_matrix(m, _classes(m, args.classes, args))
    text = LogicFormatter.serialize_logic(factor)
    if args.output:
        _write(args.output, text)
    else:
        out.emit(text.rstrip("\n"), verb="factor", **LogicFormatter.matrix_to_dict(factor))
    out.emit(f"projection: {LogicFormatter.format_value_map(projection)}", verb="factor",
             projection=_map_facts(projection))
    return EXIT_OK


def _emit_maps(maps: Sequence[ValueMap], verb: str, out: Output) -> int:
    for f in maps:
        out.emit(LogicFormatter.format_value_map(f), verb=verb, **_map_facts(f))
    if not maps:
        out.emit("none", verb=verb, map=None)
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_iso(args, out: Output) -> int:
    iso = find_isomorphism(load_matrix(args.left), load_matrix(args.right), _budget(args))
    return _emit_maps([iso] if iso else [], "iso", out)


def cmd_epi(args, out: Output) -> int:
    epis = find_epimorphisms(load_matrix(args.left), load_matrix(args.right),
                             find_all=args.all, budget=_budget(args), jobs=args.jobs)
    return _emit_maps(epis, "epi", out)


def cmd_auto(args, out: Output) -> int:
    return _emit_maps(automorphisms(load_matrix(args.matrix), _budget(args)), "auto", out)


def _emit_verdict(verb: str, v: EntailmentVerdict, out: Output) -> int:
    out.emit(_verdict_text(v), verb=verb, holds=v.holds, countervaluation=v.countervaluation,
             valuations_checked=v.valuations_checked)
    return EXIT_OK if v.holds else EXIT_NEGATIVE


def cmd_entail(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    premises = [parse_formula(p) for p in args.premise]
    return _emit_verdict("entail", entails(m, premises, parse_formula(args.conclusion), args.atom_cap), out)


def cmd_taut(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    return _emit_verdict("taut", is_tautology(m, parse_formula(args.formula), args.atom_cap), out)


def cmd_eval(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    valuation = parse_valuation(args.val) if args.val else {}
    value = evaluate(m, parse_formula(args.formula), valuation)
    designated = value in m.designated
    out.emit(f"{value}{' (designated)' if designated else ''}", verb="eval",
             value=value, designated=designated)
    return EXIT_OK


def cmd_tautologies(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    found = find_tautologies(m, atoms, args.depth, args.limit)
    for f in found:
        out.emit(LogicFormatter.format_formula(f), verb="tautologies", formula=LogicFormatter.format_formula(f))
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_qtable(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    table = distribution_table(m, args.op)
    if args.count_not is not None:
        count = table.count_not(args.count_not)
        out.emit(f"{count} of {len(table)} non-empty subsets do not fold to {args.count_not}",
                 verb="qtable", op=args.op, value=args.count_not, count=count, subsets=len(table))
        return EXIT_OK
    for subset, value in table.entries():
        out.emit(f"{{{','.join(subset)}}} -> {value}", verb="qtable", op=args.op,
                 subset=list(subset), value=value)
    return EXIT_OK


def cmd_rules(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    rules = generate_rules(m, prune=not args.no_prune)
    if args.latex:
        text = emit_latex_rules(m, rules)
        out.emit(text, verb="rules", latex=text)
        return EXIT_OK
    for rule in rules.values():
        premise = f"{rule.sign}:{rule.op}({', '.join(f'A{i + 1}' for i in range(rule.arity))})"
        branches = [" ".join(f"{sign}:A{i + 1}" for i, sign in rule.signed_children(b)) or "-"
                    for b in rule.branches]
        text = f"{premise} => " + (" | ".join(f"[{b}]" for b in branches) if branches else "×")
        out.emit(text, verb="rules", op=rule.op, arity=rule.arity, sign=rule.sign,
                 branches=[[[sign, i] for i, sign in rule.signed_children(b)] for b in rule.branches])
    return EXIT_OK


def cmd_prove(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    premises = [parse_formula(p) for p in args.premise]
    result = prove_entailment(m, generate_rules(m), premises, parse_formula(args.conclusion), _budget(args))
    s = result.tableau.stats()
    facts = {"holds": result.holds, "countervaluation": result.countervaluation,
             "nodes": s.nodes, "branches": s.branches, "expansions": s.expansions}
    if args.print_tree:
        facts["tree"] = result.tableau.to_tree()
    if result.holds:
        text = f"holds (closed tableau: {s.nodes} nodes, {s.branches} branches)"
    else:
        text = f"fails\ncountervaluation: {LogicFormatter.format_valuation(result.countervaluation)}"
    if args.print_tree:
        text = result.tableau.render() + "\n" + text
    out.emit(text, verb="prove", **facts)
    return EXIT_OK if result.holds else EXIT_NEGATIVE


def _split(text: str):
    try:
        (n1, m1), (n2, m2) = [tuple(int(x) for x in part.split(":")) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"--surjection-split expects N1:M1,N2:M2, got {text!r}") from None
    return (n1, m1), (n2, m2)


def cmd_stats(args, out: Output) -> int:
    split = _split(args.surjection_split) if args.surjection_split else None
    s = search_space_stats(args.values, args.designated, split)
    lines = [
        f"values: {s.n}, designated: {s.k}",
        f"Bell numbers: B_{s.k} = {s.bell_designated}, B_{s.n - s.k} = {s.bell_undesignated}",
        f"congruence candidates: {s.congruence_candidates}",
        f"bijection candidates: {s.bijection_candidates}",
    ]
    if s.surjection_candidates is not None:
        lines.append(f"surjection candidates: {s.surjection_candidates}")
    out.emit("\n".join(lines), verb="stats", n=s.n, k=s.k, bell_designated=s.bell_designated,
             bell_undesignated=s.bell_undesignated, congruence_candidates=s.congruence_candidates,
             bijection_candidates=s.bijection_candidates, surjection_candidates=s.surjection_candidates)
    return EXIT_OK


def cmd_report(args, out: Output) -> int:
    m = load_matrix(args.matrix)
    classes = _classes(m, args.classes, args).partition if args.classes else None
    text = emit_latex_tables(m, classes)
    if args.latex:
        _write(args.latex, text)
        out.emit(f"LaTeX tables of {m.name} written to {args.latex}", verb="report", output=args.latex)
    else:
        out.emit(text, verb="report", latex=text)
    return EXIT_OK


def _yes_no(v) -> str:
    return "yes" if v else "no"


def cmd_census(args, out: Output) -> int:
    budget = _budget(args)
    rows = seven_valued_census(budget)
    out.emit(f"{'matrix':<10} {'designated':<14} A|=~~A  A|B|=B  A&(B|~A)|=B  epi FDE  epi AC2")
    for r in rows:
        out.emit(
            f"{r.name:<10} {','.join(r.designated):<14} {_yes_no(r.double_negation_intro):<7} "
            f"{_yes_no(r.disjunctive_refutation):<7} {_yes_no(r.absorption_refutation):<12} "
            f"{_yes_no(r.epi_to_fde):<8} {_yes_no(r.epi_to_ac2)}",
            verb="census", matrix=r.name, designated=list(r.designated),
            double_negation_intro=r.double_negation_intro.holds,
            disjunctive_refutation=r.disjunctive_refutation.holds,
            absorption_refutation=r.absorption_refutation.holds,
            epi_to_fde=r.epi_to_fde, epi_to_ac2=r.epi_to_ac2,
        )
    matrices = [build_seven_valued(spec) for spec in seven_valued_specs()]
    pairs = pairwise_isomorphic(matrices, budget)
    out.emit(f"isomorphic pairs: {len(pairs)}", verb="census",
             isomorphic_pairs=[[matrices[i].name, matrices[j].name] for i, j in pairs])
    return EXIT_OK


# ---------- argument parsing ----------

def build_parser(config: CliConfig) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="line-delimited JSON output")
    common.add_argument("--jobs", type=int, default=config.jobs, help="worker processes for searches")
    common.add_argument("--budget", type=float, default=config.budget_secs, help="search budget in seconds")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="manyval", description="Workbench for finite-valued logical matrices")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = verb("show", cmd_show, "print a matrix and its tables")
    p.add_argument("matrix")

    p = verb("validate", cmd_validate, "check a matrix for well-formedness")
    p.add_argument("matrix")

    p = verb("product", cmd_product, "direct product of two matrices")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output")
    p.add_argument("--name")

    p = verb("congruences", cmd_congruences, "list the congruences of a matrix")
    p.add_argument("matrix")
    p.add_argument("--include-identity", action="store_true")
    p.add_argument("--blocks", type=int)
    p.add_argument("--limit", type=int)

    p = verb("factor", cmd_factor, "factor matrix by a congruence")
    p.add_argument("matrix")
    p.add_argument("--classes", required=True, help="partition literal {a,b|c} or congruence number")
    p.add_argument("-o", "--output")
    p.set_defaults(limit=None, blocks=None)

    p = verb("iso", cmd_iso, "find an isomorphism")
    p.add_argument("left")
    p.add_argument("right")

    p = verb("epi", cmd_epi, "find epimorphisms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--all", action="store_true")

    p = verb("auto", cmd_auto, "list automorphisms")
    p.add_argument("matrix")

    for name, handler in (("entail", cmd_entail), ("prove", cmd_prove)):
        p = verb(name, handler, "decide an entailment" if name == "entail" else "tableau proof of an entailment")
        p.add_argument("matrix")
        p.add_argument("-p", "--premise", action="append", default=[])
        p.add_argument("-c", "--conclusion", required=True)
        p.add_argument("--atom-cap", type=int, default=config.atom_cap)
    p.add_argument("--print-tree", action="store_true")

    p = verb("taut", cmd_taut, "tautology check")
    p.add_argument("matrix")
    p.add_argument("formula")
    p.add_argument("--atom-cap", type=int, default=config.atom_cap)

    p = verb("eval", cmd_eval, "evaluate a formula")
    p.add_argument("matrix")
    p.add_argument("formula")
    p.add_argument("--val", default="")

    p = verb("tautologies", cmd_tautologies, "find tautologies up to a depth")
    p.add_argument("matrix")
    p.add_argument("--atoms", default="A")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--limit", type=int)

    p = verb("qtable", cmd_qtable, "distribution quantifier table of an ACI operation")
    p.add_argument("matrix")
    p.add_argument("--op", required=True)
    p.add_argument("--count-not")

    p = verb("rules", cmd_rules, "generate tableau rules")
    p.add_argument("matrix")
    p.add_argument("--latex", action="store_true")
    p.add_argument("--no-prune", action="store_true")

    p = verb("stats", cmd_stats, "search space sizes")
    p.add_argument("--values", type=int, required=True)
    p.add_argument("--designated", type=int, required=True)
    p.add_argument("--surjection-split")

    p = verb("report", cmd_report, "LaTeX truth tables")
    p.add_argument("matrix")
    p.add_argument("--classes")
    p.add_argument("--latex")
    p.set_defaults(limit=None, blocks=None)

    verb("census", cmd_census, "survey of the seven-valued matrices")
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        parser = build_parser(CliConfig.from_env())
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    _configure_logging(args.verbose)
    out = Output(args.json)
    try:
        return args.handler(args, out)
    except UsageError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except BudgetExhaustedError as e:
        logger.error("%s", e)
        for item in e.partial:
            if isinstance(item, Congruence):
                out.emit(f"partial: {LogicFormatter.format_partition(item.partition)}",
                         verb=args.verb, partial=True, blocks=partition_to_list(item.partition))
            elif isinstance(item, ValueMap):
                out.emit(f"partial: {LogicFormatter.format_value_map(item)}",
                         verb=args.verb, partial=True, **_map_facts(item))
        return EXIT_BUDGET
    except (ManyvalError, OSError) as e:
        logger.error("%s", e)
        return EXIT_INPUT


def main() -> NoReturn:
    load_dotenv()
    # outputs carry · and ×
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == '__main__':
    main()
