"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed (or the two searches
disagree), 2 a file is malformed or inconsistent, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .codes import IndexCode, NetworkCode
from .errors import PreconditionError, SecEquivError, SizeBudgetError, UnknownVariableError
from .model import IndexInstance, NetworkInstance, validate_index, validate_network
from .search import (
    SearchBudget,
    feasibility_equivalence,
    network_feasibility_equivalence,
    search_index_codes,
    search_network_codes,
)
from .transform import IndexBackMap, MappingRecord, augment, index_to_network, network_to_index
from .translate import (
    randomized_to_augmented,
    t1_index_code_to_network_code,
    t1_network_code_to_index_code,
    t2_index_code_to_network_code,
    t2_network_code_to_index_code,
)
from .verify import (
    check_index_decodable,
    check_index_secure,
    check_network_decodable,
    check_network_secure,
    check_source_recoverable,
    conditional_entropy_bits,
    index_joint,
    network_joint,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2
EXIT_BUDGET = 3


class _Malformed(Exception):
    pass


def _load(path, *types):
    try:
        value = io.load(path)
    except FileNotFoundError as exc:
        raise _Malformed(f"{path}: no such file") from exc
    except io.FormatError as exc:
        raise _Malformed(f"{path}: {exc}") from exc
    if types and not isinstance(value, types):
        wanted = " or ".join(t.__name__ for t in types)
        raise _Malformed(f"{path}: expected {wanted}, found {type(value).__name__}")
    return value


def _valid(path, *types):
    value = _load(path, *types)
    report = validate_network(value) if isinstance(value, NetworkInstance) else validate_index(value)
    if not report.ok:
        raise _Malformed(f"{path}: invalid instance\n{report}")
    return value


def _sibling(out: str, suffix: str) -> Path:
    p = Path(out)
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    return p.with_name(f"{stem}.{suffix}.json")


def _write(value, path, echo=True):
    io.save(value, path)
    if echo:
        print(f"wrote {path}")


def _budget(args) -> SearchBudget:
    if args.budget is None:
        return SearchBudget()
    return SearchBudget(max_candidate_codes=args.budget)


# --- subcommands -----------------------------------------------------------

def cmd_validate(args) -> int:
    inst = _load(args.file, NetworkInstance, IndexInstance)
    report = validate_network(inst) if isinstance(inst, NetworkInstance) else validate_index(inst)
    print(report)
    if args.dot and isinstance(inst, NetworkInstance):
        print(to_dot(inst))
    return EXIT_OK if report.ok else EXIT_FAILED


def to_dot(inst: NetworkInstance) -> str:
    lines = ["digraph network {"]
    lines += [f'  "{n}";' for n in inst.nodes]
    tapped = {e for r in inst.eavesdroppers for e in r.tapped_edges}
    for e in inst.edges:
        style = ", style=dashed" if e.id in tapped else ""
        lines.append(f'  "{e.tail}" -> "{e.head}" [label="{e.id}/{e.alphabet}"{style}];')
    lines.append("}")
    return "\n".join(lines)


def cmd_i2n(args) -> int:
    idx = _valid(args.instance, IndexInstance)
    net, mapping = index_to_network(idx)
    _write(net, args.output)
    _write(mapping, args.mapping_out or _sibling(args.output, "mapping"))
    return EXIT_OK


def cmd_augment(args) -> int:
    net = _valid(args.instance, NetworkInstance)
    aug, record = augment(net)
    _write(aug, args.output)
    _write(record, args.record_out or _sibling(args.output, "augmentation"))
    if args.code:
        code = _load(args.code, NetworkCode)
        _write(randomized_to_augmented(net, code), args.code_out or _sibling(args.output, "code"))
    return EXIT_OK


def cmd_n2i(args) -> int:
    net = _valid(args.instance, NetworkInstance)
    if not args.no_augment:
        net, _ = augment(net)
        _write(net, args.network_out or _sibling(args.output, "network"))
    idx, backmap = network_to_index(net)
    _write(idx, args.output)
    _write(backmap, args.backmap_out or _sibling(args.output, "backmap"))
    return EXIT_OK


def cmd_translate(args) -> int:
    if args.theorem == 1:
        idx = _valid(args.instance, IndexInstance)
        mapping = _load(args.mapping, MappingRecord)
        if args.direction == "i2n":
            out = t1_index_code_to_network_code(idx, mapping, _load(args.code, IndexCode))
        else:
            out = t1_network_code_to_index_code(idx, mapping, _load(args.code, NetworkCode))
    else:
        net = _valid(args.instance, NetworkInstance)
        backmap = _load(args.mapping, IndexBackMap)
        if args.direction == "n2i":
            out = t2_network_code_to_index_code(net, _load(args.code, NetworkCode), backmap)
        else:
            out = t2_index_code_to_network_code(net, backmap, _load(args.code, IndexCode),
                                                args.sigma)
    _write(out, args.output)
    return EXIT_OK


def _describe(check) -> str:
    if check.ok:
        return "yes"
    parts = []
    if check.culprit is not None:
        parts.append(str(check.culprit))
    if check.witness:
        parts.append("at " + ", ".join(f"{k}={v}" for k, v in check.witness.items()))
    return "no" + (f" ({'; '.join(parts)})" if parts else "")


def cmd_verify(args) -> int:
    inst = _valid(args.instance, NetworkInstance, IndexInstance)
    wanted = set(args.check or ["all"])
    if "all" in wanted:
        # recoverability is a translation precondition, not a code property
        wanted = (wanted - {"all"}) | {"decode", "secure"}
    results = []
    if isinstance(inst, NetworkInstance):
        code = _load(args.code, NetworkCode)
        if "decode" in wanted:
            results.append(("decodable", check_network_decodable(inst, code)))
        if "secure" in wanted:
            results.append(("secure", check_network_secure(inst, code)))
        if "recover" in wanted:
            results.append(("recoverable", check_source_recoverable(inst, code)))
    else:
        code = _load(args.code, IndexCode)
        if "decode" in wanted:
            results.append(("decodable", check_index_decodable(inst, code)))
        if "secure" in wanted:
            results.append(("secure", check_index_secure(inst, code)))
        if wanted == {"recover"}:
            print("recoverability applies to network codes only", file=sys.stderr)
            return EXIT_MALFORMED
    print(", ".join(f"{name}: {_describe(r)}" for name, r in results))
    return EXIT_OK if all(r.ok for _, r in results) else EXIT_FAILED


def _key_sizes(pairs) -> dict:
    out = {}
    for p in pairs or []:
        node, sep, k = p.rpartition("=")
        if not sep or not node or not k.isdigit() or int(k) < 1:
            raise _Malformed(f"bad --key-size {p!r}; expected NODE=K with K >= 1")
        out[node] = int(k)
    return out


def cmd_search(args) -> int:
    inst = _valid(args.instance, NetworkInstance, IndexInstance)
    sizes = _key_sizes(args.key_size)
    if isinstance(inst, NetworkInstance):
        if args.deterministic:
            keys = {}
        else:
            keys = {v: k for v, k in augment(inst)[1].key_alphabets.items() if k > 1}
        keys.update(sizes)
        res = search_network_codes(inst, keys, _budget(args), args.prune)
    else:
        unknown = set(sizes) - {"sender"}
        if unknown:
            raise _Malformed(f"index instances take only --key-size sender=K, got {sorted(unknown)}")
        res = search_index_codes(inst, sizes.get("sender", 1), _budget(args), args.prune)
    print(f"{res.status} (explored {res.explored} partial codes)")
    if res.feasible:
        if args.output:
            _write(res.code, args.output)
        else:
            sys.stdout.write(io.emit(res.code))
    if res.exceeded:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_equiv(args) -> int:
    inst = _valid(args.instance, NetworkInstance, IndexInstance)
    if isinstance(inst, IndexInstance):
        report = feasibility_equivalence(inst, _budget(args), args.key_size, args.prune)
    else:
        report = network_feasibility_equivalence(inst, _budget(args), args.prune)
    print(report)
    return EXIT_OK if report.agree else EXIT_FAILED


def cmd_entropy(args) -> int:
    inst = _valid(args.instance, NetworkInstance, IndexInstance)
    if isinstance(inst, NetworkInstance):
        joint = network_joint(inst, _load(args.code, NetworkCode))
    else:
        joint = index_joint(inst, _load(args.code, IndexCode))
    given = [x for g in args.given for x in g.split(",") if x]
    of = [x for g in args.of for x in g.split(",") if x]
    h = conditional_entropy_bits(joint, of, given)
    print(f"H({','.join(of)} | {','.join(given)}) = {h:.12g} bits")
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="secequiv",
                                description="Secure network coding and secure index coding tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check an instance file")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true", help="also print the graph in DOT format")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("i2n", help="map an index instance to a network instance")
    s.add_argument("instance")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--mapping-out")
    s.set_defaults(func=cmd_i2n)

    s = sub.add_parser("augment", help="turn node keys into explicit sources")
    s.add_argument("instance")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--record-out")
    s.add_argument("--code", help="randomised code to convert to the augmented instance")
    s.add_argument("--code-out")
    s.set_defaults(func=cmd_augment)

    s = sub.add_parser("n2i", help="map a network instance to an index instance")
    s.add_argument("instance")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--no-augment", action="store_true")
    s.add_argument("--network-out", help="where to write the augmented network")
    s.add_argument("--backmap-out")
    s.set_defaults(func=cmd_n2i)

    s = sub.add_parser("translate", help="translate a code across a mapping")
    s.add_argument("--theorem", type=int, choices=(1, 2), required=True,
                   help="1: index instance and its network image (mapping record); "
                        "2: augmented network and its index image (back-map)")
    s.add_argument("--direction", choices=("i2n", "n2i"), required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--mapping", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--sigma", type=int, help="frozen broadcast value (default: first table entry)")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("verify", help="certify decodability, security and recoverability")
    s.add_argument("--instance", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--check", action="append", choices=("decode", "secure", "recover", "all"))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="exhaustive search for a secure code")
    s.add_argument("--instance", required=True)
    s.add_argument("--key-size", action="append", metavar="NODE=K")
    s.add_argument("--deterministic", action="store_true",
                   help="network: start from no keys instead of augmentation-sized keys")
    s.add_argument("--budget", type=int)
    s.add_argument("--prune", action="store_true", help="symmetry pruning for infeasibility")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("equiv", help="compare feasibility of an instance and its mapped image")
    s.add_argument("--instance", required=True)
    s.add_argument("--budget", type=int)
    s.add_argument("--key-size", type=int, default=1, help="sender key alphabet (index instances)")
    s.add_argument("--prune", action="store_true")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("entropy", help="conditional entropy of variables under a code")
    s.add_argument("--instance", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--given", action="append", default=[])
    s.add_argument("--of", action="append", required=True)
    s.set_defaults(func=cmd_entropy)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Malformed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except SizeBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"translation refused: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (SecEquivError, UnknownVariableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
