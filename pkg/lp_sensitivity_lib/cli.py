import argparse
import sys

from . import exceptions
from .api import lp_sensitivity
from .constants import APP_VERSION
from .core.analysis.report import format_value
from .enums import ReportFormatEnum, SenseEnum, SettingEnum
from .logger import logger


def _add_relaxation_flags(parser):
    parser.add_argument(
        "--no-complementarity", dest="complementarity",
        action="store_false", default=None,
        help="Drop the linearized complementarity rows H_i . Z = 0.",
    )
    parser.add_argument(
        "--no-rlt", dest="rlt", action="store_false", default=None,
        help="Drop the RLT rows.",
    )
    parser.add_argument(
        "--no-soc-rlt", dest="soc_rlt", action="store_false", default=None,
        help="Drop the SOC-RLT rows.",
    )


def _add_sampling_flags(parser):
    parser.add_argument("--samples", type=int, default=None,
                        help="Number of sampling trials.")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--jobs", type=int, default=None,
                        help="Worker threads.")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lp-sensitivity",
        description="Best- and worst-case optimal values of an LP whose "
                    "objective and right-hand side range over a convex set.",
    )
    ap.add_argument("--version", action="version", version=APP_VERSION)
    sub = ap.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("analyze", help="Bound q- and q+ of an instance.")
    p.add_argument("instance", help="Instance file or bundled name.")
    _add_relaxation_flags(p)
    _add_sampling_flags(p)
    p.add_argument("--oracle", action="store_true", default=None,
                   help="Also enumerate vertices of a polytopal set.")
    p.add_argument("--ablation", action="store_true", default=None,
                   help="Also solve the worst case without complementarity.")
    p.add_argument("--force-relaxation", action="store_true", default=None,
                   help="Relax even when the exact convex case applies.")
    p.add_argument("--format", choices=[f.value for f in ReportFormatEnum],
                   default=ReportFormatEnum.TEXT.value)
    p.add_argument("--timings", action="store_true",
                   help="Include wall times in keyvalue output.")

    p = sub.add_parser("reproduce", help="Run a regression corpus.")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None,
                   help="Corpus entries analyzed in parallel.")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--format", choices=[f.value for f in ReportFormatEnum],
                   default=ReportFormatEnum.TEXT.value)

    p = sub.add_parser("oracle", help="Exact bounds by vertex enumeration.")
    p.add_argument("instance")

    p = sub.add_parser("sample", help="Extreme-point sampling only.")
    p.add_argument("instance")
    _add_sampling_flags(p)
    p.add_argument("--trial-log", default=None, help="CSV output path.")

    p = sub.add_parser("dump-conic", help="Write a relaxation as text.")
    p.add_argument("instance")
    p.add_argument("--sense", choices=[s.value for s in SenseEnum],
                   default=SenseEnum.WORST_CASE.value)
    p.add_argument("--output", "-o", required=True)
    _add_relaxation_flags(p)

    p = sub.add_parser("settings", help="Show or change settings.")
    settings_sub = p.add_subparsers(dest="action")
    settings_sub.required = True
    settings_sub.add_parser("show")
    p_set = settings_sub.add_parser("set")
    p_set.add_argument("key", choices=[s.value for s in SettingEnum])
    p_set.add_argument("value")
    settings_sub.add_parser("reset")
    return ap


def _analyze(args):
    report = lp_sensitivity.analyze(
        args.instance,
        complementarity=args.complementarity, rlt=args.rlt,
        soc_rlt=args.soc_rlt, samples=args.samples, seed=args.seed,
        jobs=args.jobs, oracle=args.oracle, ablation=args.ablation,
        force_relaxation=args.force_relaxation,
    )
    sys.stdout.write(lp_sensitivity.render(
        report, args.format, include_timings=args.timings
    ))
    return 0 if report.sandwich_ok else 1


def _reproduce(args):
    result = lp_sensitivity.reproduce(
        args.corpus, seed=args.seed, jobs=args.jobs, samples=args.samples
    )
    if args.format == ReportFormatEnum.KEYVALUE.value:
        sys.stdout.write(result.keyvalue())
    else:
        sys.stdout.write(lp_sensitivity.render_comparison(result))
    return result.exit_code


def _oracle(args):
    q_minus, q_plus, exact = lp_sensitivity.oracle(args.instance)
    for key, value in (("oracle_minus", q_minus), ("oracle_plus", q_plus),
                       ("oracle_exact", exact)):
        print("{}={}".format(key, format_value(value)))
    return 0


def _sample(args):
    run = lp_sensitivity.sample(
        args.instance, samples=args.samples, seed=args.seed or 0,
        jobs=args.jobs, trial_log=args.trial_log,
    )
    for key, value in (("v_minus", run.v_minus), ("v_plus", run.v_plus),
                       ("trials", len(run.trials)),
                       ("failures", run.failures)):
        print("{}={}".format(key, format_value(value)))
    return 0


def _dump_conic(args):
    path = lp_sensitivity.dump_conic(
        args.instance, args.sense, args.output,
        complementarity=args.complementarity is not False,
        rlt=args.rlt is not False, soc_rlt=args.soc_rlt is not False,
    )
    print("[ok] {}".format(path))
    return 0


def _settings(args):
    if args.action == "set":
        lp_sensitivity.set_setting(args.key, args.value)
    elif args.action == "reset":
        lp_sensitivity.reset_settings()
    for key, value in sorted(
        lp_sensitivity.get_settings().items(), key=lambda item: item[0].value
    ):
        print("{}={}".format(key.value, format_value(value)))
    return 0


COMMANDS = {
    "analyze": _analyze,
    "reproduce": _reproduce,
    "oracle": _oracle,
    "sample": _sample,
    "dump-conic": _dump_conic,
    "settings": _settings,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except exceptions.LPSensitivityException as e:
        logger.exception("{} failed".format(args.command))
        print("[!] {}".format(e.message), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
