import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from recoherence.api import Experiments, load_config
from recoherence.exceptions import ConfigError, RecoherenceError, SelfCheckError
from recoherence.models import EntropyUnit, ExperimentKind, OracleMode
from recoherence.output import write_result

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_CERTIFIER_FAIL = 3
EXIT_SELF_CHECK = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recoherence", description="Exact decoherence, recoherence and classicality experiments."
    )
    parser.add_argument("experiment", choices=[kind.value for kind in ExperimentKind])
    parser.add_argument("--config", type=Path, required=True, help="YAML experiment config")
    parser.add_argument("--out", type=Path, default=None, help="output file (default: output.path or stdout)")
    parser.add_argument("--units", choices=[unit.value for unit in EntropyUnit], default=None)
    parser.add_argument("--oracle", choices=[mode.value for mode in OracleMode], default=OracleMode.OFF.value)
    parser.add_argument("--log-level", default="WARNING", type=str.upper)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    try:
        config = load_config(args.config)
        if args.units is not None:
            output = config.output.model_copy(update={"units": EntropyUnit(args.units)})
            config = config.model_copy(update={"output": output})
        experiments = Experiments(config, oracle_mode=args.oracle, base_dir=args.config.parent)
        result = experiments.run(args.experiment)

        out = args.out or config.output.path
        write_result(result, out)
        experiments.raise_for_violation(result)
    except (ConfigError, ValidationError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SelfCheckError as e:
        print(f"self-check failed: {e}", file=sys.stderr)
        return EXIT_SELF_CHECK
    except OSError as e:
        print(f"I/O error on {e.filename or args.config}: {e.strerror or e}", file=sys.stderr)
        return EXIT_RUNTIME
    except RecoherenceError as e:
        LOGGER.debug("Experiment failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    if result.passed is False:
        return EXIT_CERTIFIER_FAIL
    return EXIT_OK
