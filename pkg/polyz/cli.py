# polyz/cli.py
"""
Command-line front end.

    polyz collect --group g2 "g2*g1"            ->  g1^-1*g2
    polyz pow --group b1 "[0,1,1]" 2            ->  [-1,2,2]
    polyz aut-classify --group b1 --matrix "[[1,1,2],[0,0,1],[0,1,0]]"

Words are read as text (``g1^2*g3``) or as exponent vectors (``[2,0,1]``) and
printed back in the form of the first operand. ``--json`` prints one object
{"command", "group", "result"} with integers as decimal strings, described by
schema/cli_output.schema.json.

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""
import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from polyz.bench import OPS, bench
from polyz.config import get_settings
from polyz.engine import AutMatrix, Automorphism, Tower
from polyz.errors import (
    ClassificationError,
    ConfigError,
    DimensionMismatchError,
    NotAnAutomorphismError,
    PolyZError,
    PolyZParseError,
    UnknownGroupError,
)
from polyz.g2 import (
    Aut2,
    aut2_compose,
    aut2_is_inner,
    aut2_out_class,
    conjugator_g2,
    inner_from_element_g2,
    out_class_witness_g2,
)
from polyz.g3 import (
    Aut3,
    Variant,
    aut3_compose,
    aut3_inverse,
    aut3_is_inner,
    aut3_membership,
    conjugator,
    inner_from_element,
    out_class,
    out_class_witness,
    parse_aut3,
)
from polyz.iso import IsoWitness, aut2_automorphism, conjugation_witness, inner_twist_witness, verify_witness
from polyz.presentation import NormalWord, format_word, parse_presentation, parse_word
from polyz.presets import PRESETS, ZXZ, get_preset, gl2_inverse
from polyz.schemas import (
    CentralResult,
    ClassificationResult,
    CommandOutput,
    WordResult,
    encode_matrix,
    encode_word,
)

logger = logging.getLogger(__name__)

USAGE_ERRORS = (PolyZParseError, DimensionMismatchError, UnknownGroupError, ConfigError)
_DECIMAL = re.compile(r"^[+-]?\d+$")


class Group:
    """The tower selected on the command line, with its preset name if it has one."""

    def __init__(self, label: str, tower: Tower):
        self.label = label
        self.tower = tower
        self.kind = next((name for name, preset in PRESETS.items() if preset == tower), None)

    @property
    def variant(self) -> Optional[Variant]:
        return Variant(self.kind) if self.kind in {v.value for v in Variant} else None


def _resolve_group(args) -> Group:
    if args.presentation:
        try:
            text = Path(args.presentation).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise PolyZParseError(f"cannot read presentation file {args.presentation}: {e}")
        return Group(args.presentation, Tower.from_presentation(parse_presentation(text)))
    return Group(args.group.strip().lower(), get_preset(args.group))


# Operands

def _is_integer(value) -> bool:
    if isinstance(value, bool):
        return False
    return isinstance(value, int) or (isinstance(value, str) and bool(_DECIMAL.match(value.strip())))


def read_word(text: str, tower: Tower) -> Tuple[NormalWord, bool]:
    """A normal word and whether it was given as an exponent vector."""
    stripped = text.strip()
    if not stripped.startswith("["):
        return tower.collect(parse_word(text, tower.n)), False
    try:
        data = json.loads(stripped)
    except json.JSONDecodeError as e:
        raise PolyZParseError(f"word vector is not valid JSON: {e.msg}", e.pos)
    except ValueError as e:
        raise PolyZParseError(f"word vector entry out of range: {e}")
    if not isinstance(data, list) or not all(_is_integer(v) for v in data):
        raise PolyZParseError("word vector must be a JSON array of integers")
    if len(data) != tower.n:
        raise DimensionMismatchError(f"expected {tower.n} exponents, got {len(data)}")
    try:
        return tuple(int(v) for v in data), True
    except ValueError as e:
        raise PolyZParseError(f"word vector entry out of range: {e}")


def show_word(word: NormalWord, as_vector: bool) -> str:
    if as_vector:
        return json.dumps(list(word), separators=(",", ":"))
    return format_word(word)


def _word_result(word: NormalWord, as_vector: bool) -> Tuple[str, Any]:
    return show_word(word, as_vector), WordResult(word=encode_word(word), text=format_word(word))


def _parse_integer(text: str) -> int:
    if not _DECIMAL.match(text.strip()):
        raise PolyZParseError(f"expected an integer, got {text!r}")
    try:
        return int(text.strip())
    except ValueError as e:
        raise PolyZParseError(f"integer out of range: {e}")


AnyAut = Union[Aut2, Aut3]


def parse_automorphism(group: Group, text: str) -> AnyAut:
    """An Aut2 (g2) or Aut3 (b1, a0, a1, b0) from a family text form or a JSON matrix."""
    if group.kind == "g2":
        return Aut2.parse(text)
    variant = group.variant
    if variant is None:
        raise ClassificationError(f"automorphism families are known for g2, b1, a0, a1 and b0, not {group.label}")
    if text.lstrip().startswith("["):
        matrix = AutMatrix.parse(text)
        if matrix.dimension != 3:
            raise DimensionMismatchError(f"{variant.value} automorphisms are 3x3 matrices")
        found = aut3_membership(variant, matrix)
        if found is None:
            raise NotAnAutomorphismError(f"{matrix} is not an automorphism of {variant.value}")
        return found
    f = parse_aut3(text)
    if f.variant is not variant:
        raise ClassificationError(f"{f} is an automorphism of {f.variant.value}, not {variant.value}")
    return f


def engine_automorphism(group: Group, text: str) -> Automorphism:
    """An automorphism of any tower, with inverse images from the family or derived."""
    if group.kind == "g2":
        return aut2_automorphism(Aut2.parse(text))
    if group.variant is not None:
        f = parse_automorphism(group, text)
        return Automorphism(group.tower, f.matrix(), aut3_inverse(f).matrix().columns)

    tower = group.tower
    matrix = AutMatrix.parse(text)
    if matrix.dimension != tower.n:
        raise DimensionMismatchError(f"matrix of dimension {matrix.dimension} used on a tower with {tower.n} generators")
    if tower.n == 1:
        inverse = matrix.columns
    elif tower == ZXZ:
        inverse = AutMatrix(rows=gl2_inverse(matrix.rows)).columns
    else:
        inverse = tower.derive_inverse_images(matrix.columns)
    return Automorphism(tower, matrix, inverse)


# Commands: each returns (text for stdout, JSON result)

def cmd_collect(args, group: Group):
    word = group.tower.collect(parse_word(args.word, group.tower.n))
    return _word_result(word, False)


def cmd_mul(args, group: Group):
    x, as_vector = read_word(args.x, group.tower)
    y, _ = read_word(args.y, group.tower)
    return _word_result(group.tower.mul(x, y), as_vector)


def cmd_inv(args, group: Group):
    x, as_vector = read_word(args.x, group.tower)
    return _word_result(group.tower.inv(x), as_vector)


def cmd_pow(args, group: Group):
    x, as_vector = read_word(args.x, group.tower)
    return _word_result(group.tower.pow(x, _parse_integer(args.m)), as_vector)


def cmd_central(args, group: Group):
    x, _ = read_word(args.x, group.tower)
    central = group.tower.is_central(x)
    return ("central" if central else "not central"), CentralResult(word=encode_word(x), central=central)


def _classify(f: AnyAut) -> ClassificationResult:
    if isinstance(f, Aut2):
        inner = aut2_is_inner(f)
        found_class = aut2_out_class(f)
        h = conjugator_g2(f) if inner else None
    else:
        inner = aut3_is_inner(f)
        found_class = out_class(f)
        h = conjugator(f) if inner else None
    return ClassificationResult(
        automorphism=str(f),
        matrix=encode_matrix(f.matrix()),
        inner=inner,
        out_class=str(found_class),
        conjugator=encode_word(h) if h is not None else None,
    )


def _classification_text(result: ClassificationResult, f: AnyAut) -> str:
    lines = [
        result.automorphism,
        f"matrix: {f.matrix()}",
        f"inner: {'yes' if result.inner else 'no'}",
        f"out class: {result.out_class}",
    ]
    if result.conjugator is not None:
        lines.append(f"conjugator: {format_word(tuple(int(v) for v in result.conjugator))}")
    return "\n".join(lines)


def cmd_aut_classify(args, group: Group):
    if (args.matrix is None) == (args.automorphism is None):
        raise PolyZParseError("give either --matrix or an automorphism")
    f = parse_automorphism(group, args.matrix if args.matrix is not None else args.automorphism)
    result = _classify(f)
    return _classification_text(result, f), result


def cmd_aut_compose(args, group: Group):
    f = parse_automorphism(group, args.f)
    g = parse_automorphism(group, args.g)
    if isinstance(f, Aut2):
        composed = aut2_compose(f, g)
    else:
        composed = aut3_compose(f, g)
    result = _classify(composed)
    return _classification_text(result, composed), result


def cmd_aut_inner(args, group: Group):
    h, _ = read_word(args.h, group.tower)
    if group.kind == "g2":
        f = inner_from_element_g2(h)
    elif group.variant is not None:
        f = inner_from_element(group.variant, h)
    else:
        raise ClassificationError(f"automorphism families are known for g2, b1, a0, a1 and b0, not {group.label}")
    result = _classify(f)
    return _classification_text(result, f), result


def cmd_out_class(args, group: Group):
    f = parse_automorphism(group, args.automorphism)
    if isinstance(f, Aut2):
        found_class, h = out_class_witness_g2(f)
    else:
        found_class, h = out_class_witness(f)
    text = f"{found_class} via {format_word(h)}"
    return text, {"out_class": str(found_class), "witness": encode_word(h)}


def _witness(args, group: Group) -> IsoWitness:
    alpha = engine_automorphism(group, args.alpha)
    if args.a is not None:
        a, _ = read_word(args.a, group.tower)
        return inner_twist_witness(alpha, a)
    return conjugation_witness(alpha, engine_automorphism(group, args.psi))


def cmd_iso_witness(args, group: Group):
    witness = _witness(args, group)
    text = "\n".join(
        [
            f"kind: {witness.kind}",
            f"source twist: {witness.source_twist.matrix}",
            f"target twist: {witness.target_twist.matrix}",
            "forward: (h, k) -> (h*A_k, k)" if witness.kind == "inner_twist" else "forward: (g, k) -> (psi(g), k)",
        ]
    )
    return text, witness.describe()


class _WitnessFailed(PolyZError):
    """Sampled witness check with failures; carries the report for printing."""

    def __init__(self, text: str, result: Any):
        super().__init__(text)
        self.text = text
        self.result = result


def cmd_iso_verify(args, group: Group):
    witness = _witness(args, group)
    report = verify_witness(witness, sample_count=args.count, exponent_bound=args.bound, seed=args.seed)
    summary = report.summary()
    text = (
        f"{witness.kind} witness: {summary['sample_count']} samples (seed {summary['seed']}, "
        f"bound {summary['exponent_bound']}), {summary['multiplicativity_failures']} multiplicativity "
        f"and {summary['round_trip_failures']} round trip failures"
    )
    result = dict(witness.describe(), report=summary)
    if not report.ok:
        raise _WitnessFailed(text, result)
    return text, result


def cmd_bench(args, group: Group):
    settings = get_settings()
    if group.kind is None:
        raise UnknownGroupError(f"bench runs on presets only, not {group.label}")
    count = settings.bench_count if args.count is None else args.count
    seed = settings.seed if args.seed is None else args.seed
    report = bench(group.kind, args.op, count, seed=seed, power=args.power, repeats=args.repeats)
    if report.speedup is None:
        text = f"{report.group} {report.op} x{report.count}: nothing timed"
    else:
        text = (
            f"{report.group} {report.op} x{report.count}: kernel {report.kernel_seconds:.4f}s, "
            f"engine {report.engine_seconds:.4f}s ({report.speedup:.1f}x)"
        )
    return text, report.model_dump()


COMMANDS = {
    "collect": cmd_collect,
    "mul": cmd_mul,
    "inv": cmd_inv,
    "pow": cmd_pow,
    "central": cmd_central,
    "aut-classify": cmd_aut_classify,
    "aut-compose": cmd_aut_compose,
    "aut-inner": cmd_aut_inner,
    "out-class": cmd_out_class,
    "iso-witness": cmd_iso_witness,
    "iso-verify": cmd_iso_verify,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    selector = common.add_mutually_exclusive_group()
    selector.add_argument("--group", help=f"preset group: {', '.join(PRESETS)}")
    selector.add_argument("--presentation", help="file holding a poly-Z presentation")
    common.add_argument("--json", action="store_true", help="print one JSON object")

    parser = argparse.ArgumentParser(prog="polyz", description="Exact arithmetic in poly-Z groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collect", parents=[common], help="normal form of a word")
    p.add_argument("word")
    p = sub.add_parser("mul", parents=[common], help="product x*y")
    p.add_argument("x")
    p.add_argument("y")
    p = sub.add_parser("inv", parents=[common], help="inverse of x")
    p.add_argument("x")
    p = sub.add_parser("pow", parents=[common], help="power x^m")
    p.add_argument("x")
    p.add_argument("m")
    p = sub.add_parser("central", parents=[common], help="whether x commutes with every generator")
    p.add_argument("x")

    p = sub.add_parser("aut-classify", parents=[common], help="family, Inn and Out data of an automorphism")
    p.add_argument("automorphism", nargs="?", help="family form, e.g. alpha(1) or b1:gamma(a=0; B=[[1,0],[0,1]])")
    p.add_argument("--matrix", help="JSON matrix of rows")
    p = sub.add_parser("aut-compose", parents=[common], help="composition f∘g")
    p.add_argument("f")
    p.add_argument("g")
    p = sub.add_parser("aut-inner", parents=[common], help="conjugation by h")
    p.add_argument("h")
    p = sub.add_parser("out-class", parents=[common], help="outer class and reducing inner element")
    p.add_argument("automorphism")

    for name, help_text in (("iso-witness", "build an isomorphism witness"), ("iso-verify", "build and check a witness")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--alpha", required=True, help="twist of the base group")
        how = p.add_mutually_exclusive_group(required=True)
        how.add_argument("--a", help="element for the inner twist i_a∘alpha")
        how.add_argument("--psi", help="automorphism conjugating alpha")
        if name == "iso-verify":
            p.add_argument("--count", type=int, help="number of samples")
            p.add_argument("--bound", type=int, help="exponent bound for samples")
            p.add_argument("--seed", type=int)

    p = sub.add_parser("bench", parents=[common], help="time closed-form kernels against the engine")
    p.add_argument("--op", choices=OPS, default="mul")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--power", type=int, help="fixed exponent for pow inputs")
    p.add_argument("--repeats", type=int, default=1, help="timing runs; the median is reported")
    return parser


def _emit(args, group: Optional[Group], result: Any) -> None:
    if hasattr(result, "model_dump"):
        result = result.model_dump()
    output = CommandOutput(command=args.command, group=group.label if group else None, result=result)
    print(output.model_dump_json())


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = get_settings()
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    if (args.group is None) == (args.presentation is None):
        print("error: give exactly one of --group or --presentation", file=sys.stderr)
        return 2

    group = None
    try:
        group = _resolve_group(args)
        text, result = COMMANDS[args.command](args, group)
    except _WitnessFailed as e:
        if args.json:
            _emit(args, group, e.result)
        else:
            print(e.text)
        return 1
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PolyZError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    if args.json:
        _emit(args, group, result)
    else:
        print(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
