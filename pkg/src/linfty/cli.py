"""Command line front end over fixture documents.

Usage: linfty <command> <fixture> [flags]

Commands:
  validate            run every declared object's own validator
  mc                  test a named element for the Maurer-Cartan equation
  twist               print the fixture with the selected structure twisted
  cohomology          Betti numbers of a flat structure
  twist-identities    iterated-twist and pushforward identities
  module-consistency  twisting commutes with the module constructor
  resolution-check    constituents, complex conditions, untwisted exactness
  adapted-mc          exactness of the whole diagram after twisting
  prop-key            full criterion on a ladder: hypotheses, then the
                      induced map computed by two independent routes

Exit codes: 0 every check passed, 1 a mathematical check failed,
2 malformed input (bad file, bad reference, bad arguments).

Machine-readable reports (--report PATH, and stdout for twist) carry no
timestamps and are byte-identical across repeated runs with the same
arguments.  --seed adds a reproducible randomized suite to the commands
that have one.
"""

import argparse
import sys
from fractions import Fraction

from .graded import InputError, MathCheckError, el_scale
from .structures import (
    VERIFY_ARITY,
    chain_complex,
    check_morphism,
    check_square_zero,
    invert,
    spaces_equal,
)
from .twisting import (
    check_morphism_twist_identities,
    check_pushforward_functoriality,
    check_structure_twist_identities,
    maurer_cartan_series,
    mc_check,
    twist_structure,
)
from .modules import (
    check_module_morphism,
    check_module_square_zero,
    check_module_twist_consistency,
)
from .resolutions import check_adapted_mc, check_resolution, prop_key_pipeline
from .io import (
    FixtureWriter,
    canonical_dumps,
    element_json,
    load_document,
    plain,
    serialize_document,
)


def _read_document(path):
    import os.path
    if not os.path.exists(path) and os.path.exists(path + ".json"):
        path = path + ".json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read fixture {path}: {e}") from None
    return load_document(text)


def _pick(table, chosen, kind):
    """Named selection, or the unique entry when the section has exactly one."""
    if chosen is not None:
        if chosen not in table:
            raise InputError(
                f"no {kind} named {chosen!r} (have {sorted(table)})")
        return chosen, table[chosen]
    if len(table) == 1:
        name, = table
        return name, table[name]
    if not table:
        raise InputError(f"fixture declares no {kind}")
    raise InputError(
        f"fixture declares several {kind}s {sorted(table)}; pick one with "
        f"--{kind.replace(' ', '-')}")


def _element_on(doc, name, space, flag):
    if name is None:
        raise InputError(f"this command needs {flag} <name>")
    if name not in doc.elements:
        raise InputError(
            f"no element named {name!r} (have {sorted(doc.elements)})")
    espace, value = doc.elements[name]
    if not spaces_equal(espace, space):
        raise InputError(
            f"element {name!r} lives on a different space than the "
            f"selected object")
    return value


def _square_zero_cap(args):
    return args.max_arity if args.max_arity is not None else VERIFY_ARITY


def _collect(results, failures, key, check):
    try:
        check()
        results[key] = "ok"
    except MathCheckError as e:
        results[key] = f"failed: {e}"
        failures.append(key)


def cmd_validate(doc, args):
    cap = _square_zero_cap(args)
    results = {}
    failures = []
    for name, s in doc.structures.items():
        _collect(results, failures, f"structures.{name}",
                 lambda s=s: check_square_zero(s, max_arity=cap))
    for name, f in doc.morphisms.items():
        _collect(results, failures, f"morphisms.{name}",
                 lambda f=f: check_morphism(f, max_arity=cap))
    for name, m in doc.modules.items():
        _collect(results, failures, f"modules.{name}",
                 lambda m=m: check_module_square_zero(m, max_arity=args.max_arity))
    for name, mm in doc.module_morphisms.items():
        _collect(results, failures, f"module_morphisms.{name}",
                 lambda mm=mm: check_module_morphism(mm, max_arity=args.max_arity))
    report = {"objects": results, "ok": not failures, "failures": failures}
    lines = [f"{key}: {value}" for key, value in sorted(results.items())]
    lines.append(f"validate: {'pass' if not failures else 'FAIL'}")
    return not failures, report, lines


def cmd_mc(doc, args):
    name, structure = _pick(doc.structures, args.structure, "structure")
    check_square_zero(structure, max_arity=_square_zero_cap(args))
    pi = _element_on(doc, args.element, structure.space, "--element")
    residual = maurer_cartan_series(structure, pi)
    ok = mc_check(structure, pi)
    report = {
        "structure": name,
        "element": args.element,
        "maurer_cartan": ok,
        "residual": element_json(residual),
    }
    lines = [f"mc: structure {name}, element {args.element}: "
             f"{'Maurer-Cartan' if ok else 'NOT Maurer-Cartan'}"]
    if residual:
        shown = ", ".join(f"{g}: {q}" for g, q in
                          sorted(element_json(residual).items()))
        lines.append(f"residual: {shown}")
    else:
        lines.append("residual: 0")
    return ok, report, lines


def cmd_twist(doc, args):
    name, structure = _pick(doc.structures, args.structure, "structure")
    check_square_zero(structure, max_arity=_square_zero_cap(args))
    pi = _element_on(doc, args.element, structure.space, "--element")
    twisted = twist_structure(structure, pi)
    writer = FixtureWriter()
    writer.add_structure(twisted, name)
    writer.add_element(twisted.space, pi, args.element)
    report = writer.raw
    return True, report, None


def cmd_cohomology(doc, args):
    name, structure = _pick(doc.structures, args.structure, "structure")
    check_square_zero(structure, max_arity=_square_zero_cap(args))
    cc = chain_complex(structure)
    betti = {d: cc.cohomology(d)[0] for d in cc.degrees()}
    report = {"structure": name, "betti": betti}
    lines = [f"cohomology of {name}:"]
    lines += [f"  degree {d}: {betti[d]}" for d in sorted(betti)]
    return True, report, lines


def _random_identity_suite(seed):
    from .instances import random_instance
    inst = random_instance(seed)
    pi = inst["pi"]
    second = el_scale(pi, Fraction(2))
    checks = {}
    checks["structure_iterated_twists"] = check_structure_twist_identities(
        inst["base"], pi, second)
    checks["morphism_iterated_twists"] = check_morphism_twist_identities(
        inst["morphism"], pi, second)
    checks["pushforward_functoriality"] = check_pushforward_functoriality(
        invert(inst["morphism"]), inst["morphism"], pi)
    return {"seed": seed, "checks": checks}


def cmd_twist_identities(doc, args):
    name, structure = _pick(doc.structures, args.structure, "structure")
    check_square_zero(structure, max_arity=_square_zero_cap(args))
    pi = _element_on(doc, args.element, structure.space, "--element")
    second = _element_on(doc, args.second_element, structure.space,
                         "--second-element")
    checks = {"structure_iterated_twists":
              check_structure_twist_identities(structure, pi, second)}
    for fname, f in sorted(doc.morphisms.items()):
        if f.source == structure:
            checks[f"morphism_iterated_twists.{fname}"] = \
                check_morphism_twist_identities(f, pi, second)
            for gname, g in sorted(doc.morphisms.items()):
                if g.source == f.target:
                    checks[f"pushforward_functoriality.{gname}.{fname}"] = \
                        check_pushforward_functoriality(g, f, pi)
    report = {"structure": name, "element": args.element,
              "second_element": args.second_element, "checks": checks}
    lines = [f"{key}: pass" for key in sorted(checks)]
    if args.seed is not None:
        report["random"] = _random_identity_suite(args.seed)
        lines.append(f"random suite (seed {args.seed}): pass")
    lines.append("twist-identities: pass")
    return True, report, lines


def cmd_module_consistency(doc, args):
    if not doc.morphisms:
        raise InputError("fixture declares no morphisms to check")
    checks = {}
    used = False
    pi_name = args.element
    for fname, f in sorted(doc.morphisms.items()):
        if pi_name is None:
            raise InputError("this command needs --element <name>")
        if pi_name not in doc.elements:
            raise InputError(
                f"no element named {pi_name!r} (have {sorted(doc.elements)})")
        espace, pi = doc.elements[pi_name]
        if not spaces_equal(espace, f.source.space):
            continue
        used = True
        checks[fname] = check_module_twist_consistency(
            f, pi, max_arity=args.max_arity)
    if not used:
        raise InputError(
            f"element {pi_name!r} matches no morphism source in the fixture")
    report = {"element": pi_name, "morphisms": checks}
    lines = [f"module-consistency {fname}: pass" for fname in sorted(checks)]
    if args.seed is not None:
        from .instances import random_instance
        inst = random_instance(args.seed)
        check_module_twist_consistency(inst["morphism"], inst["pi"])
        report["random"] = {"seed": args.seed, "checks": {"module_consistency": True}}
        lines.append(f"random suite (seed {args.seed}): pass")
    lines.append("module-consistency: pass")
    return True, report, lines


def cmd_resolution_check(doc, args):
    name, diagram = _pick(doc.resolutions, args.resolution, "resolution")
    result = check_resolution(diagram, max_arity=args.max_arity)
    report = {"resolution": name, "ok": result["ok"],
              "failures": result["failures"], "sequence": result["sequence"]}
    lines = [f"resolution-check {name}: {'pass' if result['ok'] else 'FAIL'}"]
    lines += [f"  {msg}" for msg in result["failures"]]
    return result["ok"], report, lines


def cmd_adapted_mc(doc, args):
    name, diagram = _pick(doc.resolutions, args.resolution, "resolution")
    pi = _element_on(doc, args.element, diagram.base.space, "--element")
    adapted, sequence = check_adapted_mc(diagram, pi, max_arity=args.max_arity)
    report = {"resolution": name, "element": args.element,
              "adapted": adapted, "sequence": sequence}
    lines = [f"adapted-mc {name}, element {args.element}: "
             f"{'adapted' if adapted else 'NOT adapted'}"]
    if not adapted:
        bad = sorted(k for k, v in sequence["exact_at"].items() if not v)
        lines.append(f"  twisted sequence fails exactness at {bad}")
    return adapted, report, lines


def cmd_prop_key(doc, args):
    name, ladder = _pick(doc.ladders, args.ladder, "ladder")
    pi = _element_on(doc, args.element, ladder.source.base.space, "--element")
    result = prop_key_pipeline(ladder, pi, max_arity=args.max_arity)
    report = dict(result)
    report["ladder_name"] = name
    report["element"] = args.element
    ok = result["verdict"] == "quasi-isomorphism"
    lines = [f"prop-key {name}, element {args.element}: {result['verdict']}"]
    if not ok:
        lines.append(f"  failing clause: {result['failing_clause']}")
    if args.seed is not None:
        from .instances import random_ladder
        rladder, xi = random_ladder(args.seed)
        rresult = prop_key_pipeline(rladder, xi, max_arity=args.max_arity)
        rok = rresult["verdict"] == "quasi-isomorphism"
        report["random"] = {"seed": args.seed, "verdict": rresult["verdict"]}
        lines.append(f"random ladder (seed {args.seed}): {rresult['verdict']}")
        ok = ok and rok
    return ok, report, lines


_COMMANDS = {
    "validate": cmd_validate,
    "mc": cmd_mc,
    "twist": cmd_twist,
    "cohomology": cmd_cohomology,
    "twist-identities": cmd_twist_identities,
    "module-consistency": cmd_module_consistency,
    "resolution-check": cmd_resolution_check,
    "adapted-mc": cmd_adapted_mc,
    "prop-key": cmd_prop_key,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="linfty",
        description="exact checks on curved homotopy structures, their "
                    "twists, modules and resolutions")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("fixture", help="path to a fixture document")
        p.add_argument("--element", help="named element used as twist datum")
        if command == "prop-key":
            p.add_argument("--mc", dest="element",
                           help="alias for --element")
        p.add_argument("--second-element",
                       help="second named element for iterated identities")
        p.add_argument("--max-arity", type=int,
                       help="cap the arity examined by the checks")
        p.add_argument("--report", help="write the machine-readable report here")
        p.add_argument("--seed", type=int,
                       help="also run the reproducible randomized suite")
        p.add_argument("--structure", help="structure name when several exist")
        p.add_argument("--resolution", help="resolution name when several exist")
        p.add_argument("--ladder", help="ladder name when several exist")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _read_document(args.fixture)
        ok, report, lines = _COMMANDS[args.command](doc, args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MathCheckError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    full = {"command": args.command, "fixture": args.fixture}
    full.update(plain(report))
    text = canonical_dumps(full)
    if lines is None:
        # twist: the fixture itself is the machine output
        text = serialize_document(report)
        sys.stdout.write(text)
    else:
        for line in lines:
            print(line)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
