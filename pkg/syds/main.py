"""
SyDS Toolkit - Command Line Interface
Simulate, solve, kernelize and generate synchronous Boolean dynamical systems
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from syds.api.dimacs import read_dimacs_file, read_qdimacs_file
from syds.api.documents import parse_syds, parse_td, write_kernel_report, write_syds, write_td
from syds.config import get_settings, override_settings
from syds.models.errors import ResourceCapError, SydsError
from syds.models.schemas import ProblemInstance, ProblemType, SolveResult
from syds.services.dynamics_service import orbit, simulate
from syds.services.kernel_service import kernelize, solve_via_kernel
from syds.services.oracle_service import (
    build_transition_graph,
    oracle_allconv,
    oracle_conv,
    oracle_reach,
)
from syds.services.solver_service import (
    solve_allconv_bounded,
    solve_allconv_bruteforce,
    solve_conv,
    solve_conv_bounded,
    solve_reach,
)
from syds.tools.path_counter_tool import gen_path_counter
from syds.tools.qbf_reduction_tool import build_qbf_reduction
from syds.tools.shape_tool import check_reduction_shape
from syds.tools.treedepth_tool import compute_treedepth_exact, heuristic_decomposition
from syds.tools.unsat_reduction_tool import gen_unsat_reduction
from syds.utils.bit_utils import to_bitstring

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_CAP = 3

METHODS = ("direct", "bounded", "kernel", "oracle")
SUPPORTED = {
    ProblemType.REACH: ("direct", "kernel", "oracle"),
    ProblemType.CONV: ("direct", "bounded", "kernel", "oracle"),
    ProblemType.ALLCONV: ("direct", "bounded", "oracle"),
}


class UsageError(SydsError, ValueError):
    """Unsupported option combination"""


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"💾 Wrote {output}")


def _load_instance(path: str, horizon: Optional[int] = None) -> ProblemInstance:
    inst = parse_syds(_read_text(path))
    if horizon is not None:
        inst = inst.model_copy(update={"horizon": horizon})
    return inst


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    inst = _load_instance(args.file)
    if inst.start is None:
        raise ValueError("simulate needs a document with a 'start' configuration")
    n = inst.node_count
    settings = get_settings()

    max_steps = args.steps if args.steps is not None else args.max_steps
    trajectory = orbit(
        inst.syds, inst.start, max_steps=max_steps, memory_cap=settings.orbit_memory_cap
    )
    if args.steps is not None:
        steps = args.steps
    elif trajectory.truncated:
        steps = trajectory.steps
    else:
        steps = trajectory.tail_mu + trajectory.period_lambda

    for config in simulate(inst.syds, inst.start, steps):
        print(to_bitstring(config, n))
    if trajectory.truncated:
        print(f"truncated after {trajectory.steps} steps")
    else:
        print(f"mu={trajectory.tail_mu} lambda={trajectory.period_lambda}")
    return EXIT_YES


def _check_step_cap(inst: ProblemInstance, max_steps: Optional[int]) -> None:
    """Refuse to answer NO when the orbit did not close within --max-steps"""
    if max_steps is None or (inst.horizon is not None and inst.horizon <= max_steps):
        return
    trajectory = orbit(
        inst.syds, inst.start, max_steps=max_steps, memory_cap=get_settings().orbit_memory_cap
    )
    if trajectory.truncated:
        raise ResourceCapError(f"Orbit did not close within {max_steps} steps", cap=max_steps)


def _solve(problem: str, method: str, inst: ProblemInstance, args) -> SolveResult:
    settings = get_settings()
    result = SolveResult(problem=problem, method=method, answer=False)

    if method == "oracle":
        tg = build_transition_graph(inst.syds, max_bits=settings.max_config_bits)
        if problem == ProblemType.REACH:
            if inst.start is None or inst.target is None:
                raise ValueError("Reachability needs 'start' and 'target' configurations")
            result.answer = oracle_reach(tg, inst.start, inst.target, inst.horizon)
        elif problem == ProblemType.CONV:
            if inst.start is None:
                raise ValueError("Convergence needs a 'start' configuration")
            result.answer = oracle_conv(tg, inst.start, inst.horizon)
        else:
            result.answer = oracle_allconv(tg)
        return result

    if method == "kernel":
        td = parse_td(_read_text(args.td), inst.syds.network) if args.td else None
        result.answer = solve_via_kernel(inst, td, problem)
        return result

    if method == "bounded":
        if problem == ProblemType.CONV:
            result.answer = solve_conv_bounded(inst, max_set_size=settings.influence_set_cap)
        else:
            result.answer = solve_allconv_bounded(inst, max_set_size=settings.influence_set_cap)
        return result

    if problem == ProblemType.REACH:
        answer, step = solve_reach(inst, memory_cap=settings.orbit_memory_cap)
        if not answer:
            _check_step_cap(inst, args.max_steps)
        result.answer, result.steps = answer, step
    elif problem == ProblemType.CONV:
        _check_step_cap(inst, args.max_steps)
        answer, fixed_point = solve_conv(inst, memory_cap=settings.orbit_memory_cap)
        result.answer = answer
        if fixed_point is not None:
            result.fixed_point = to_bitstring(fixed_point, inst.node_count)
    else:
        result.answer = solve_allconv_bruteforce(inst, max_bits=settings.max_config_bits)
    return result


def cmd_solve(args) -> int:
    if args.method not in SUPPORTED[args.problem]:
        raise UsageError(f"Method '{args.method}' does not apply to {args.problem}")
    if args.td and args.method != "kernel":
        raise UsageError("--td is only used with --method kernel")
    inst = _load_instance(args.file, args.horizon)
    result = _solve(args.problem, args.method, inst, args)

    print("YES" if result.answer else "NO")
    if result.steps is not None:
        print(f"steps={result.steps}")
    if result.fixed_point is not None:
        print(f"fixed_point={result.fixed_point}")
    return EXIT_YES if result.answer else EXIT_NO


def cmd_kernelize(args) -> int:
    inst = _load_instance(args.file)
    td = parse_td(_read_text(args.td), inst.syds.network)
    kernel, kernel_td, report = kernelize(inst, td)
    _emit(write_syds(kernel), args.output)

    report_text = write_kernel_report(report)
    if args.report:
        Path(args.report).write_text(report_text, encoding="utf-8")
    elif args.output and args.output != "-":
        Path(f"{args.output}.report.json").write_text(report_text, encoding="utf-8")
    else:
        sys.stderr.write(report_text)
    if args.td_output:
        Path(args.td_output).write_text(write_td(kernel_td, kernel.syds.network), encoding="utf-8")
    return EXIT_YES


def cmd_gen(args) -> int:
    if args.kind == "path-counter":
        syds, start = gen_path_counter(args.n)
        inst = ProblemInstance(syds=syds, start=start)
    elif args.kind == "qbf":
        reduction = build_qbf_reduction(read_qdimacs_file(args.file), args.constant_degree)
        inst = reduction.instance
        shape = check_reduction_shape(inst.syds.network, control=reduction.control)
        logger.info(
            f"📐 Max in-degree {shape.max_in_degree}, "
            f"forest without control: {shape.forest_without_control}"
        )
    else:
        inst = ProblemInstance(syds=gen_unsat_reduction(read_dimacs_file(args.file)))
    _emit(write_syds(inst), args.output)
    return EXIT_YES


def cmd_treedepth(args) -> int:
    inst = _load_instance(args.file)
    net = inst.syds.network
    td = compute_treedepth_exact(net) if args.exact else heuristic_decomposition(net)
    logger.info(f"🌲 Decomposition height {td.height} over {net.node_count} nodes")
    _emit(write_td(td, net), args.output)
    return EXIT_YES


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syds",
        description="Synchronous Boolean dynamical systems: simulate, solve, kernelize, generate",
    )
    parser.add_argument("--max-configs", type=int, default=None,
                        help="cap on stored configurations (orbit memory and 2^n oracle tables)")
    parser.add_argument("--max-steps", type=int, default=None,
                        help="stop simulating after this many steps (undecided answers exit 3)")
    parser.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="log level for diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="print the trajectory of the start configuration")
    p.add_argument("file", nargs="?", default="-", help="SyDS document ('-' for stdin)")
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("solve", help="decide reach, conv or allconv")
    p.add_argument("problem", choices=[ProblemType.REACH, ProblemType.CONV, ProblemType.ALLCONV])
    p.add_argument("file")
    p.add_argument("--method", choices=METHODS, default="direct")
    p.add_argument("--td", default=None, help="treedepth document for --method kernel")
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("kernelize", help="compress an instance along a treedepth decomposition")
    p.add_argument("file")
    p.add_argument("--td", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--report", default=None, help="where to write the kernel report")
    p.add_argument("--td-output", default=None, help="where to write the kernel's decomposition")
    p.set_defaults(handler=cmd_kernelize)

    p = sub.add_parser("gen", help="generate gadget networks")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("path-counter")
    g.add_argument("n", type=int)
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("qbf")
    g.add_argument("file", help="QDIMACS file")
    g.add_argument("--constant-degree", action="store_true")
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("unsat")
    g.add_argument("file", help="DIMACS file")
    g.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("treedepth", help="compute a treedepth decomposition")
    p.add_argument("file")
    p.add_argument("--exact", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_treedepth)
    return parser


def _configure(args) -> None:
    changes = {"log_level": args.log_level}
    if args.max_configs is not None:
        if args.max_configs < 1:
            raise UsageError("--max-configs must be positive")
        changes["orbit_memory_cap"] = args.max_configs
        changes["max_config_bits"] = max(args.max_configs.bit_length() - 1, 1)
    if args.max_steps is not None and args.max_steps < 0:
        raise UsageError("--max-steps must be non-negative")
    settings = override_settings(**changes)

    level = getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_YES

    try:
        _configure(args)
        return args.handler(args)
    except ResourceCapError as e:
        print(f"❌ Resource cap reached: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, SydsError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
