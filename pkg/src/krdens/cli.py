"""Command-line front end: ``krdens <subcommand> [flags]``.

Results go to stdout as JSON (default) or aligned text; diagnostics go to
stderr. Exit codes: 0 success, 1 failed self-verification, 2 precondition
violation, 3 oracle budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import acceptance, btree, globalfield as gf, hironaka as hz, oracle
from .errors import BudgetExceededError, InexactDivisionError, PreconditionError
from .exact import Polynomial, rational_to_str
from .localfield import InertLocalRing, LocalHermitianSpec, mu


@dataclass
class CommandResult:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs,
                "outputs": self.outputs, "checks": self.checks}

    @classmethod
    def from_dict(cls, d: dict) -> "CommandResult":
        return cls(d["command"], d.get("inputs", {}), d.get("outputs", {}), d.get("checks", []))

    @property
    def all_passed(self) -> bool:
        return all(c.get("passed") for c in self.checks)


def exact(value):
    """Serialise a value with every number kept exact."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return rational_to_str(Fraction(value))
    if isinstance(value, Polynomial):
        return value.to_json_list()
    if isinstance(value, (set, frozenset)):
        return [exact(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [exact(v) for v in value]
    if isinstance(value, dict):
        return {k: exact(v) for k, v in value.items()}
    return value


def _approx(outputs: dict) -> dict:
    out = {}
    for k, v in outputs.items():
        if isinstance(v, str):
            try:
                out[k] = float(Fraction(v))
            except (ValueError, ZeroDivisionError):
                pass
        elif isinstance(v, list) and v and all(isinstance(x, str) for x in v):
            try:
                out[k] = [float(Fraction(x)) for x in v]
            except (ValueError, ZeroDivisionError):
                pass
    return out


def render(result: CommandResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.to_dict(), indent=2, sort_keys=False)
    rows = [("command", result.command)]
    rows += [(f"in.{k}", json.dumps(v)) for k, v in result.inputs.items()]
    rows += [(f"out.{k}", v if isinstance(v, str) else json.dumps(v)) for k, v in result.outputs.items()]
    for c in result.checks:
        rows.append((f"check.{c['name']}", ("pass" if c["passed"] else "FAIL") + (f"  {c.get('detail', '')}" if c.get("detail") else "")))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _ints(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(s) for s in text.split(","))


# ---------------------------------------------------------------------------
# subcommands


def cmd_mu(args) -> CommandResult:
    return CommandResult("mu", {"p": args.p, "a": args.a, "b": args.b},
                         {"mu": exact(mu(args.a, args.b, args.p))})


def cmd_density_poly(args) -> CommandResult:
    t = hz.DensityTarget(args.a, args.b, args.p)
    builders = {"nonsplit": hz.F_poly_nonsplit, "closed": hz.F_poly_closed, "nagaoka": hz.F_poly_nagaoka}
    F = builders[args.kind](t)
    out = {"F": exact(F), "F_at_1": exact(F(1))}
    checks = []
    if args.kind != "nagaoka":
        out["alpha_prime"] = exact(-F.derivative()(1))
    if args.check and args.kind != "nagaoka":
        other = hz.F_poly_closed(t) if args.kind == "nonsplit" else hz.F_poly_nonsplit(t)
        checks.append({"name": "nonsplit_equals_closed", "passed": other == F})
    for r in args.r or []:
        xi = hz.xi_selfdual(r) if args.kind == "nagaoka" else hz.xi_nonsplit(r)
        val = F(hz.x_at(args.p, r))
        out[f"alpha_r{r}"] = exact(val)
        if args.check:
            checks.append({"name": f"general_formula_r{r}", "passed": val == hz.alpha_general(xi, (args.a, args.b), args.p)})
    return CommandResult("density-poly", {"p": args.p, "a": args.a, "b": args.b, "kind": args.kind}, out, checks)


def cmd_density_general(args) -> CommandResult:
    xi, lam = _ints(args.xi), _ints(args.lam)
    val = hz.alpha_general(xi, lam, args.p)
    return CommandResult("density-general", {"p": args.p, "xi": list(xi), "lambda": list(lam)},
                         {"alpha": exact(val)})


def _parse_target(text: str, n_hint: int | None = None):
    """``"t11"`` (n=1) or ``"t11,t22,a,b"`` (n=2, off-diagonal a + b*delta)."""
    vals = _ints(text)
    if len(vals) == 1:
        return [[vals[0]]]
    if len(vals) == 4:
        t11, t22, a, b = vals
        return [[t11, (a, b)], [(a, -b), t22]]
    raise PreconditionError(f"target must be 't11' or 't11,t22,a,b', got {text!r}")


def cmd_oracle(args) -> CommandResult:
    ring = InertLocalRing(args.p, args.k, args.eps)
    S = LocalHermitianSpec(_ints(args.S))
    job = oracle.OracleJob(ring, S, _parse_target(args.T), args.budget)
    inputs = {"p": args.p, "k": args.k, "eps": ring.eps, "S": list(S.diag_exponents), "T": args.T,
              "workers": args.workers}
    if args.stabilize:
        r = oracle.stabilized_density(job, args.workers, args.progress)
        out = {"density": exact(r.value), "previous": exact(r.previous), "k": r.k, "status": r.status}
    else:
        count = oracle.count_solutions(job, args.workers, args.progress)
        out = {"count": exact(count), "density": exact(count * oracle.normalisation(job)),
               "size": exact(job.size)}
    return CommandResult("oracle", inputs, out)


def _config(args) -> btree.TreeConfig:
    return btree.TreeConfig(args.p, args.m1, args.m2, args.d, args.e)


def cmd_tree(args) -> CommandResult:
    cfg = _config(args)
    tree = None if cfg.zero_divisor else btree.build_tree(cfg)
    brute = btree.intersect_bruteforce(cfg, tree)
    closed = btree.intersect_closed(cfg)
    inv = btree.diag_invariants(cfg)
    out = {"bruteforce": exact(brute), "closed": exact(closed)}
    if inv == btree.NOT_INTEGRAL:
        out.update(invariants=inv, r=None, gamma_position=None, mu=None)
    else:
        r, pos = btree.overlap_ball(cfg)
        out.update(invariants=list(inv), r=r, gamma_position=pos, mu=exact(mu(inv[0], inv[1], cfg.p)))
    if tree is not None:
        out["vertices"] = len(tree)
    checks = [{"name": "bruteforce_equals_closed", "passed": brute == closed}]
    if inv != btree.NOT_INTEGRAL:
        checks.append({"name": "closed_equals_mu", "passed": Fraction(closed) == mu(inv[0], inv[1], cfg.p)})
    if args.dot and tree is not None:
        with open(args.dot, "w") as fh:
            fh.write(tree.to_dot(cfg))
        out["dot"] = args.dot
    return CommandResult("tree", {"p": args.p, "m1": args.m1, "m2": args.m2, "d": args.d, "e": args.e}, out, checks)


def cmd_identity(args) -> CommandResult:
    checks = []
    for a in range(args.max + 1):
        for b in range(a + 1):
            if (a + b) % 2:
                continue
            t = hz.DensityTarget(a, b, args.p)
            lhs, rhs = hz.mu_from_densities(t), mu(a, b, args.p)
            checks.append({"name": f"({a},{b})", "passed": lhs == rhs,
                           "detail": f"{rational_to_str(lhs)} vs {rational_to_str(rhs)}"})
    return CommandResult("identity", {"p": args.p, "max": args.max},
                         {"pairs": str(len(checks)), "all_pass": all(c["passed"] for c in checks)}, checks)


def _field(args) -> gf.QuadField:
    return gf.QuadField(args.disc)


def cmd_diff(args) -> CommandResult:
    K = _field(args)
    level = gf.LevelStructure(args.level, K)
    T = gf.GlobalHermitianMatrix.parse(K, args.T)
    d1 = gf.diff_set(K, level, T)
    d2 = gf.diff_set_via_invariants(K, level, T)
    return CommandResult("diff", {"disc": args.disc, "level": args.level, "T": args.T},
                         {"diff": [str(x) for x in d1], "det": exact(T.det)},
                         [{"name": "valuation_vs_invariants", "passed": d1 == d2}])


def _place(text: str):
    return gf.INF if text in ("inf", "oo", "infinity") else int(text)


def cmd_hilbert(args) -> CommandResult:
    if args.random:
        rng = random.Random(args.seed)
        nonzero = [x for x in range(-args.bound, args.bound + 1) if x]
        checks = []
        for _ in range(args.random):
            a, b = rng.choice(nonzero), rng.choice(nonzero)
            checks.append({"name": f"({a},{b})", "passed": gf.hilbert_product(a, b) == 1})
        return CommandResult("hilbert", {"random": args.random, "seed": args.seed, "bound": args.bound},
                             {"pairs": str(len(checks))}, checks)
    if args.a is None or args.b is None:
        raise PreconditionError("hilbert needs --a and --b (or --random N)")
    a, b = Fraction(args.a), Fraction(args.b)
    inputs = {"a": args.a, "b": args.b}
    if args.place:
        inputs["place"] = args.place
        return CommandResult("hilbert", inputs, {"symbol": str(gf.hilbert_symbol(a, b, _place(args.place)))})
    places = gf.relevant_places(a, b)
    symbols = {str(v): str(gf.hilbert_symbol(a, b, v)) for v in places}
    return CommandResult("hilbert", inputs, {"symbols": symbols},
                         [{"name": "product_formula", "passed": gf.hilbert_product(a, b) == 1}])


def cmd_classnum(args) -> CommandResult:
    K = _field(args)
    h, w = gf.class_number(K)
    return CommandResult("classnum", {"disc": args.disc},
                         {"h": str(h), "units": str(w), "constant_2h_over_w": exact(gf.degree_constant(K)),
                          "forms": [list(f) for f in gf.reduced_forms(args.disc)]})


def cmd_localize(args) -> CommandResult:
    K = _field(args)
    T = gf.GlobalHermitianMatrix.parse(K, args.T)
    a, b = gf.localize(K, T, args.p)
    out = {"a": str(a), "b": str(b)}
    if (a + b) % 2 == 0:
        m = mu(a, b, args.p)
        out["mu"] = exact(m)
        out["whittaker_derivative_coefficient"] = exact(gf.whittaker_derivative_factor(a, b, args.p))
        out["tag"] = "coefficient of gamma_p(V+)^2 * log p"
    return CommandResult("localize", {"disc": args.disc, "T": args.T, "p": args.p}, out)


def cmd_reps(args) -> CommandResult:
    K = _field(args)
    L = gf.GlobalHermitianMatrix.parse(K, args.L)
    T = gf.GlobalHermitianMatrix.parse(K, args.T)
    count = gf.count_lattice_reps(K, L, T)
    out = {"count": exact(count), "constant_2h_over_w": exact(gf.degree_constant(K))}
    if args.p is not None:
        mu_p = gf.localize_mu(K, T, args.p)
        out["mu_p"] = exact(mu_p)
        out["log_tag"] = f"log {args.p}^2"
    return CommandResult("reps", {"disc": args.disc, "L": args.L, "T": args.T, "p": args.p}, out)


def cmd_selftest(args) -> CommandResult:
    results = acceptance.run_all(seed=args.seed, workers=args.workers,
                                 echo=lambda line: print(line, file=sys.stderr))
    return CommandResult("selftest", {"seed": args.seed, "workers": args.workers},
                         {"passed": str(sum(r.ok for r in results)), "total": str(len(results))},
                         [r.as_dict() for r in results])


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--approx", action="store_true", help="also print labeled decimal approximations")

    parser = argparse.ArgumentParser(prog="krdens", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("mu", cmd_mu, "mu_p(T) for T ~ diag(p^a, p^b)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)

    sp = add("density-poly", cmd_density_poly, "F(S, T; X) as exact coefficients")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--kind", choices=("nonsplit", "closed", "nagaoka"), default="nonsplit")
    sp.add_argument("--r", type=int, action="append", help="also evaluate at X = (-p)^-r (repeatable)")
    sp.add_argument("--check", action="store_true", help="cross-check against the other code path")

    sp = add("density-general", cmd_density_general, "Hironaka's formula for alpha(S_xi, T_lambda)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--xi", required=True, help="comma-separated exponents of S")
    sp.add_argument("--lam", required=True, help="comma-separated exponents of T")

    sp = add("oracle", cmd_oracle, "brute-force density over o/p^k")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--eps", type=int, default=None)
    sp.add_argument("--S", required=True, help="comma-separated exponents, S = diag(p^e_i)")
    sp.add_argument("--T", required=True, help="'t11' or 't11,t22,a,b' (off-diagonal a + b*delta)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    sp.add_argument("--stabilize", action="store_true", help="compare precisions k and k+1")
    sp.add_argument("--progress", action="store_true", help="progress on stderr")

    sp = add("tree", cmd_tree, "local intersection number on the Bruhat-Tits tree")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m1", type=int, required=True)
    sp.add_argument("--m2", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--e", type=int, default=None)
    sp.add_argument("--dot", metavar="FILE", help="write the truncated tree in DOT format")

    sp = add("identity", cmd_identity, "check the density/geometry identity over a sweep")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--max", type=int, default=12)

    sp = add("diff", cmd_diff, "Diff(T) for a global Hermitian matrix")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--T", required=True, help="'t1,t2,ax,ay'")

    sp = add("hilbert", cmd_hilbert, "Hilbert symbols over Q")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--place", help="prime or 'inf'; omit for all relevant places")
    sp.add_argument("--random", type=int, default=0, help="check the product formula on N random pairs")
    sp.add_argument("--bound", type=int, default=50)

    sp = add("classnum", cmd_classnum, "class number and unit count")
    sp.add_argument("--disc", type=int, required=True)

    sp = add("localize", cmd_localize, "local invariants (a, b) of T at an inert prime")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--T", required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("reps", cmd_reps, "count representations of T by a rank-2 Hermitian lattice")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--L", required=True, help="Gram matrix of L = o_k^2 as 't1,t2,ax,ay'")
    sp.add_argument("--T", required=True)
    sp.add_argument("--p", type=int, default=None, help="inert prime for the mu_p tag")

    sp = add("selftest", cmd_selftest, "run the acceptance checks")
    sp.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InexactDivisionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    if args.approx:
        result.outputs["approx (decimal, not exact)"] = _approx(result.outputs)
    print(render(result, args.format))
    return 0 if result.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
