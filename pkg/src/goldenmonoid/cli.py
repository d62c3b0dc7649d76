"""Command-line front end: distances and geodesics, atom and type-graph
reports, hyperbolicity checks, transducer runs, nucleus computation, and the
quotient map, with deterministic text/json/dot output.

Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 internal anomaly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .ztau import DomainError, EPWord, q as q_map
from .monoid import check_word, normalize
from .cayley import (AnomalyError, BudgetExceeded, bfs_distance, build_ball,
                     distance_report)
from . import boundary
from . import hyperbolic
from . import transducer as tr


@dataclass(frozen=True)
class Config:
    max_ball_radius: int = 12
    truncation_margin: int = 6
    machine_state_budget: int = 256
    comparison_depth_cap: int = 64
    output_format: str = "text"

    def validate(self) -> Config:
        if min(self.max_ball_radius, self.truncation_margin,
               self.machine_state_budget, self.comparison_depth_cap) <= 0:
            raise DomainError("config budgets must be positive")
        if self.output_format not in ("text", "json", "dot"):
            raise DomainError(f"unknown output format {self.output_format!r}")
        return self


def load_config(path: str | None) -> Config:
    path = path or os.environ.get("GOLDEN_CONFIG")
    if not path:
        return Config()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}")
    return Config(**data).validate()


def _emit(args, payload: dict, text_lines):
    fmt = args.format or "text"
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


def cmd_dist(args, cfg: Config) -> int:
    x = normalize(check_word(args.x))
    y = normalize(check_word(args.y))
    rep = distance_report(x, y)
    lines = [f"d({x or '1'}, {y or '1'}) = {rep['d']}",
             "path: " + " -> ".join(v if v else "1" for v in rep["path"])]
    if args.oracle:
        r = max(len(x), len(y)) + 1
        if r > cfg.max_ball_radius + 1:
            raise BudgetExceeded("oracle ball exceeds configured radius")
        d_bfs = bfs_distance(build_ball(r), x, y)
        rep["oracle"] = d_bfs
        lines.append(f"bfs oracle (radius {r}): {d_bfs}"
                     + (" [agrees]" if d_bfs == rep["d"] else " [MISMATCH]"))
        if d_bfs != rep["d"]:
            raise AnomalyError("closed-form distance disagrees with BFS oracle")
    _emit(args, rep, lines)
    return 0


def cmd_atoms(args, cfg: Config) -> int:
    if args.radius > cfg.max_ball_radius:
        raise BudgetExceeded("radius exceeds configured cap")
    rep = boundary.atom_report(args.level, args.radius, cfg.truncation_margin)
    lines = [f"level {args.level} (truncation {args.radius}): "
             f"{rep['infinite']} infinite + {rep['finite']} finite atoms"]
    for item in rep["atoms"]:
        if item["symbolic-match"]:
            lines.append(f"  atom {item['signature-hash']}: |members|={item['member-count']}"
                         f" matches {item['symbolic-match']}")
    _emit(args, rep, lines)
    return 0


def cmd_typegraph(args, cfg: Config) -> int:
    n = args.depth + cfg.truncation_margin
    if n > cfg.max_ball_radius:
        raise BudgetExceeded("type graph depth exceeds configured radius")
    tg = boundary.type_graph(args.depth, n, cfg.truncation_margin)
    if (args.format or "dot") == "json":
        print(json.dumps({"schema": "1", "nodes": list(tg.nodes),
                          "edges": [{"from": s, "label": l, "to": t}
                                    for (s, l), t in sorted(tg.edges.items())]},
                         sort_keys=True))
    else:
        print(tg.dot())
    return 0


def cmd_hyper(args, cfg: Config) -> int:
    radius = args.radius
    if radius is None:
        radius = {"patterns": 5, "expansive": 10, "departing": 10,
                  "quasi": 8, "delta": 8}[args.check]
    if radius > cfg.max_ball_radius:
        raise BudgetExceeded("radius exceeds configured cap")
    if args.check == "patterns":
        ab = hyperbolic.build_augmented_ball(args.levels + 1)
        pats = [str(hyperbolic.level_pattern(ab, n)) for n in range(1, args.levels + 1)]
        rep = {"schema": "1", "check": "patterns", "levels": args.levels,
               "patterns": pats}
        _emit(args, rep, [", ".join(pats)])
    elif args.check == "expansive":
        viols = hyperbolic.check_expansive(hyperbolic.build_augmented_ball(radius))
        rep = {"schema": "1", "check": "expansive", "radius": radius,
               "violations": viols}
        _emit(args, rep, [f"{len(viols)} violations"])
    elif args.check == "departing":
        viols = hyperbolic.check_departing(hyperbolic.build_augmented_ball(radius),
                                           args.m, args.k)
        rep = {"schema": "1", "check": "departing", "radius": radius,
               "params": {"m": args.m, "k": args.k}, "violations": viols}
        _emit(args, rep, [f"{len(viols)} violations"])
    elif args.check == "quasi":
        rep = hyperbolic.check_quasi_isometry(radius)
        ok = "bounds hold" if not rep["violations"] else f"{len(rep['violations'])} violations"
        _emit(args, rep, [f"{ok} (max ratio {rep['max_ratio']:.3f})"])
        if rep["violations"]:
            raise AnomalyError("quasi-isometry bounds violated")
    else:
        rep = hyperbolic.estimate_delta(radius)
        _emit(args, rep, [f"delta estimate on radius {radius}: {rep['delta']}"
                          f" ({rep['triangles']} triangles)"])
    return 0


def _load_machine(name: str, cfg: Config) -> tr.Transducer:
    reg = tr.registry()
    if name in reg:
        return reg[name]
    if os.path.exists(name):
        with open(name) as fh:
            text = fh.read()
        if name.endswith(".json"):
            return tr.machine_from_json(json.loads(text))
        tp = tr.parse_treepair(text)
        pl = tr.pl_from_treepair(tp)
        machine = tr.synthesize(pl, cfg.machine_state_budget)
        if not tr.verify_commutation(machine, pl, _commutation_words(4)):
            raise AnomalyError(f"machine from {name!r} fails commutation")
        return machine
    raise DomainError(f"unknown machine {name!r}")


def _commutation_words(total: int):
    import itertools
    out = []
    for n in range(1, total + 1):
        for plen in range(1, n + 1):
            for pre in itertools.product("01", repeat=n - plen):
                for per in itertools.product("01", repeat=plen):
                    out.append(EPWord("".join(pre), "".join(per)).canonical())
    return list({str(w): w for w in out}.values())


def cmd_transduce(args, cfg: Config) -> int:
    machine = _load_machine(args.machine, cfg)
    word = EPWord.parse(args.input)
    out = tr.run_infinite(machine, word)
    _emit(args, {"schema": "1", "machine": args.machine, "input": str(word),
                 "output": str(out)}, [str(out)])
    return 0


def cmd_nucleus(args, cfg: Config) -> int:
    names = [n.strip() for n in args.machines.split(",") if n.strip()]
    machines = [_load_machine(n, cfg) for n in names]
    nuc = tr.nucleus(machines, budget=cfg.machine_state_budget)
    reg = tr.registry()
    labels = []
    for i, m in enumerate(nuc):
        for rname, rmach in reg.items():
            if tr.equivalent(m, rmach):
                labels.append(rname)
                break
        else:
            labels.append(f"machine-{i}")
    labels.sort()
    conds = tr.check_nucleus_conditions(nuc)
    _emit(args, {"schema": "1", "machines": names, "nucleus": labels,
                 "conditions": conds},
          [", ".join(labels),
           "conditions: " + ("all pass" if conds["all"] else str(conds))])
    return 0


def cmd_qmap(args, cfg: Config) -> int:
    word = EPWord.parse(args.input)
    value = q_map(word)
    _emit(args, {"schema": "1", "input": str(word), "value": str(value)},
          [str(value)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goldenmonoid",
                                description=__doc__.splitlines()[0])
    p.add_argument("--config", help="path to a JSON config file "
                                    "(or set GOLDEN_CONFIG)")
    p.add_argument("--format", choices=("text", "json", "dot"),
                   help="output format")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="distance and geodesic between two words")
    d.add_argument("x")
    d.add_argument("y")
    d.add_argument("--oracle", action="store_true",
                   help="confirm against the BFS oracle")
    d.set_defaults(fn=cmd_dist)

    a = sub.add_parser("atoms", help="atom decomposition at a level")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--radius", type=int, default=12)
    a.set_defaults(fn=cmd_atoms)

    t = sub.add_parser("typegraph", help="empirical type graph as DOT")
    t.add_argument("--depth", type=int, default=6)
    t.set_defaults(fn=cmd_typegraph)

    h = sub.add_parser("hyper", help="hyperbolicity checks")
    h.add_argument("--check", required=True,
                   choices=("expansive", "departing", "quasi", "delta", "patterns"))
    h.add_argument("--radius", type=int)
    h.add_argument("--m", type=int, default=3)
    h.add_argument("--k", type=int, default=2)
    h.add_argument("--levels", type=int, default=4)
    h.set_defaults(fn=cmd_hyper)

    td = sub.add_parser("transduce", help="run a machine on an infinite word")
    td.add_argument("--machine", required=True,
                    help="X0|beta|gamma|id, a machine .json, or a tree-pair file")
    td.add_argument("--input", required=True, help="word as prefix(period)")
    td.set_defaults(fn=cmd_transduce)

    n = sub.add_parser("nucleus", help="nucleus of a set of machines")
    n.add_argument("--machines", required=True, help="comma-separated names")
    n.set_defaults(fn=cmd_nucleus)

    qm = sub.add_parser("qmap", help="exact value of the quotient map")
    qm.add_argument("--input", required=True, help="word as prefix(period)")
    qm.set_defaults(fn=cmd_qmap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config).validate()
        return args.fn(args, cfg)
    except DomainError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except AnomalyError as exc:
        print(f"anomaly: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
