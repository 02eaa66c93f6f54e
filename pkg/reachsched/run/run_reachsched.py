import json
import logging
import os
import sys
import time
from argparse import ArgumentParser

import numpy as np

import reachsched
from reachsched import constants
from reachsched.basic.exceptions import (ConfigError, ConstructionError, InfeasibilityError, PlanningFailureError,
                                         ReachSchedError, StageOrderError)
from reachsched.io import artifacts
from reachsched.io.file_loader import load_json_file
from reachsched.io.scenario import ScenarioConfig
from reachsched.model.lyapunov import verify_clf_on_grid
from reachsched.model.system_model import check_lipschitz
from reachsched.planning.reference import ReferenceTrajectory, validate_reference
from reachsched.planning.rrt import plan_rrt
from reachsched.scheduling.error_model import check_C1_C4
from reachsched.scheduling.leg import prepare_leg
from reachsched.simulation import campaign

logger = logging.getLogger("ReachSched")

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(reachsched.__file__)), "scenarios")


def resolve_config(name):
    """ Path of the scenario ``name``: an existing file or the name of a bundled scenario ("vehicle"). """
    if os.path.isfile(name):
        return name
    bundled = os.path.join(SCENARIO_DIR, name if name.endswith(".json") else name + ".json")
    if os.path.isfile(bundled):
        return bundled
    raise ConfigError("no scenario file or bundled scenario named {!r}".format(name))


def _out(out_dir, name, index=None):
    return os.path.join(out_dir, name if index is None else artifacts.indexed_name(name, index))


def _load_references(config, out_dir):
    refs = []
    for i in range(len(config.leg_systems())):
        path = _out(out_dir, constants.sREFERENCE_JSON, i)
        if not os.path.isfile(path):
            raise StageOrderError("{} is missing, run the plan stage first".format(path))
        refs.append((path, ReferenceTrajectory.from_dict(load_json_file(path))))
    return refs


def _legs(config, out_dir, M=None):
    """ Prepared legs from the planned references. """
    systems = config.leg_systems()
    refs = _load_references(config, out_dir)
    legs = []
    for sys_i, (_, ref) in zip(systems, refs):
        clf = config.build_clf(sys_i)
        legs.append(prepare_leg(sys_i, clf, ref, config.M if M is None else M, config.nu_bar))
    return legs, [path for path, _ in refs]


def cmd_plan(config, out_dir, flags):
    outputs = []
    seeds = {}
    start = time.perf_counter()
    for i, sys_i in enumerate(config.leg_systems()):
        seed = config.rrt_seed + i
        ref = plan_rrt(sys_i, config.epsilon, config.rrt_params(), seed)
        report = validate_reference(sys_i, ref)
        if not report.ok:
            raise PlanningFailureError("reference {} fails its postconditions: {}".format(i, report.failures))
        rows = np.hstack([np.arange(ref.L + 1)[:, None], ref.states,
                          np.vstack([ref.controls, np.full((1, sys_i.m), np.nan)])])
        header = (["k"] + ["x{}".format(j) for j in range(sys_i.n)] + ["u{}".format(j) for j in range(sys_i.m)])
        outputs.append(artifacts.save_json(_out(out_dir, constants.sREFERENCE_JSON, i), ref.to_dict()))
        outputs.append(artifacts.save_csv(_out(out_dir, constants.sREFERENCE_CSV, i), rows, header))
        seeds["rrt_{}".format(i)] = seed
        logger.info("leg {}: reference with L = {}".format(i, ref.L))
    artifacts.write_manifest(out_dir, "plan", [config.path], outputs, seeds,
                             {"total": time.perf_counter() - start})
    return constants.EXIT_OK


def cmd_abstract(config, out_dir, flags):
    start = time.perf_counter()
    legs, inputs = _legs(config, out_dir)
    outputs = []
    summary = []
    infeasible = None
    for i, leg in enumerate(legs):
        env_rows = np.column_stack([np.arange(leg.L + 1), leg.env.v_max])
        outputs.append(artifacts.save_json(_out(out_dir, constants.sENVELOPE_JSON, i), leg.env.to_dict()))
        outputs.append(artifacts.save_csv(_out(out_dir, constants.sENVELOPE_CSV, i), env_rows, ["k", "v_max"]))
        entry = {"leg": i, "M": leg.T.M, "L": leg.L, "nu_bar": leg.T.partition.nu_bar,
                 "levels": leg.T.levels.tolist(), "successors": leg.T.successors.tolist(),
                 "s_init": leg.TA.s_init, "edges": leg.TA.n_edges(), "iterations": leg.TA.iterations}
        try:
            entry["min_cost"] = leg.solve().cost
            entry["feasible"] = True
        except InfeasibilityError as ex:
            entry.update({"feasible": False, "first_unreachable_layer": ex.layer})
            infeasible = infeasible or ex
        summary.append(entry)
    outputs.append(artifacts.save_json(_out(out_dir, constants.sABSTRACTION_JSON), {"legs": summary}))
    artifacts.write_manifest(out_dir, "abstract", inputs + [config.path], outputs, {},
                             {"total": time.perf_counter() - start})
    if infeasible is not None:
        raise infeasible
    return constants.EXIT_OK


def cmd_schedule(config, out_dir, flags):
    start = time.perf_counter()
    legs, inputs = _legs(config, out_dir)
    entries = []
    for i, leg in enumerate(legs):
        schedule = leg.solve()
        conditions = check_C1_C4(leg.model, leg.env, leg.ref, schedule.bits)
        entries.append({"leg": i, "schedule": schedule.to_dict(), "run": leg.run,
                        "bounds": conditions.bounds, "conditions": conditions.to_dict()})
        logger.info("leg {}: {} communications over L = {}".format(i, schedule.cost, leg.L))
    path = artifacts.save_json(_out(out_dir, constants.sSCHEDULE_JSON), {"legs": entries})
    artifacts.write_manifest(out_dir, "schedule", inputs + [config.path], [path], {},
                             {"total": time.perf_counter() - start})
    return constants.EXIT_OK


def _write_traces(out_dir, stats, prefix):
    trace_dir = os.path.join(out_dir, constants.sTRACES_DIR)
    os.makedirs(trace_dir, exist_ok=True)
    paths = []
    for record in stats.records:
        if record.trace is None:
            continue
        name = "{}_{}.csv".format(prefix, record.index)
        paths.append(artifacts.save_csv(os.path.join(trace_dir, name), record.trace.rows(), record.trace.header()))
    return paths


def cmd_simulate(config, out_dir, flags):
    if not os.path.isfile(_out(out_dir, constants.sSCHEDULE_JSON)):
        raise StageOrderError("schedule.json is missing, run the schedule stage first")
    start = time.perf_counter()
    legs, inputs = _legs(config, out_dir)
    timings = {}
    outputs = []
    if config.mode == "traverse":
        if len(legs) < 2 or config.x0 is None:
            raise ConfigError("traverse mode needs a traverse block with x0")
        result = campaign.traverse(legs, config.x0, config.traverse_mode, config.disturbance, config.seed,
                                   config.traverse_steps)
    elif flags.paired:
        result, timings = campaign.compare_online_offline(legs[0], config.runs, config.disturbance, config.seed)
    else:
        stats = campaign.monte_carlo(legs[0], config.runs, config.disturbance, config.seed, config.mode)
        result = stats.to_dict()
        timings["mean_compute_time"] = stats.mean_compute_time()
        if flags.traces:
            outputs.extend(_write_traces(out_dir, stats, config.mode))
    outputs.append(artifacts.save_json(_out(out_dir, constants.sSTATS_JSON), result))
    timings["total"] = time.perf_counter() - start
    artifacts.write_manifest(out_dir, "simulate", inputs + [config.path, _out(out_dir, constants.sSCHEDULE_JSON)],
                             outputs, {"runtime": config.seed}, timings)
    return constants.EXIT_OK


def cmd_sweep(config, out_dir, flags):
    start = time.perf_counter()
    refs = _load_references(config, out_dir)
    systems = config.leg_systems()
    specs = [(sys_i, config.build_clf(sys_i), ref) for sys_i, (_, ref) in zip(systems, refs)]
    result = {}
    if flags.bisect_wmax:
        try:
            leg = prepare_leg(specs[0][0], specs[0][1], specs[0][2], config.M, config.nu_bar)
        except ConstructionError as ex:
            raise ConfigError("cannot build the abstraction for the w_max bisection: {}".format(ex))
        result["wmax"] = campaign.wmax_frontier(leg, config.x0, config.wmax_upper)
    if flags.m_list or not flags.bisect_wmax:
        m_list = [int(m) for m in flags.m_list.split(",")] if flags.m_list else config.m_list
        result["M"] = campaign.sweep_M(specs, m_list, config.nu_bar, config.x0, config.traverse_mode,
                                       config.disturbance, config.seed, config.traverse_steps)
    path = artifacts.save_json(_out(out_dir, constants.sSWEEP_JSON), result)
    artifacts.write_manifest(out_dir, "sweep", [p for p, _ in refs] + [config.path], [path],
                             {"runtime": config.seed}, {"total": time.perf_counter() - start})
    return constants.EXIT_OK


def cmd_verify_clf(config, out_dir, flags):
    start = time.perf_counter()
    sys_0 = config.build_system()
    clf = config.build_clf(sys_0)
    report = verify_clf_on_grid(clf, sys_0, flags.grid_density)
    result = {"family": clf.family, "grid": report.to_dict(), "lipschitz": check_lipschitz(sys_0)}
    path = artifacts.save_json(_out(out_dir, constants.sVERIFY_JSON), result)
    artifacts.write_manifest(out_dir, "verify-clf", [config.path], [path], {"verification": constants.VERIFICATION_SEED},
                             {"total": time.perf_counter() - start})
    print(json.dumps(result, indent=2, sort_keys=True))
    if not report.ok:
        logger.warning("the CLF inequalities fail on {} grid samples".format(sum(report.counts.values())))
    return constants.EXIT_OK


COMMANDS = {"plan": cmd_plan, "abstract": cmd_abstract, "schedule": cmd_schedule, "simulate": cmd_simulate,
            "sweep": cmd_sweep, "verify-clf": cmd_verify_clf}


def build_parser():
    parser = ArgumentParser(description="Communication schedules for reach-avoid networked control.")
    parser.add_argument('command', choices=sorted(COMMANDS), help="pipeline stage to run")
    parser.add_argument('--config', required=True, type=str, metavar="STR",
                        help="scenario JSON file or name of a bundled scenario (vehicle, pendulum)")
    parser.add_argument('--out', default=None, type=str, metavar="STR",
                        help="output directory, overrides the scenario's output entry")
    parser.add_argument('--seed', default=None, type=int, metavar="INT",
                        help="overrides the planner and runtime seeds")
    parser.add_argument('--mode', default=None, choices=["offline", "online", "traverse"],
                        help="overrides the runtime mode")
    parser.add_argument('--m-list', default=None, type=str, metavar="STR",
                        help="comma separated list of M values for the sweep stage, e.g. 400,100,50,10")
    parser.add_argument('--bisect-wmax', action='store_true',
                        help="sweep stage: bisect the largest w_max for offline and online scheduling")
    parser.add_argument('--paired', action='store_true',
                        help="simulate stage: paired offline/online campaign on common random numbers")
    parser.add_argument('--traces', action='store_true', help="simulate stage: write per-run CSV traces")
    parser.add_argument('--grid-density', default=constants.DEFAULT_GRID_DENSITY, type=int, metavar="INT",
                        help="verify-clf stage: grid points per axis")
    parser.add_argument('--log-level', default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def main(argv=None):
    flags = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, flags.log_level), format="%(asctime)s %(name)s %(levelname)s "
                                                                         "%(message)s")
    try:
        config = ScenarioConfig.from_file(resolve_config(flags.config))
        if flags.seed is not None:
            config.rrt["seed"] = flags.seed
            config.runtime["seed"] = flags.seed
        if flags.mode is not None:
            config.runtime["mode"] = flags.mode
        out_dir = flags.out if flags.out is not None else config.output
        os.makedirs(out_dir, exist_ok=True)
        return COMMANDS[flags.command](config, out_dir, flags)
    except (InfeasibilityError, PlanningFailureError) as ex:
        logger.error("infeasible: {}".format(ex))
        return constants.EXIT_INFEASIBLE
    except (ReachSchedError, OSError) as ex:
        logger.error("{}: {}".format(type(ex).__name__, ex))
        return constants.EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
