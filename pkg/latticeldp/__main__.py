import sys
import argh

from latticeldp.cli.rate import cmd_rate
from latticeldp.cli.path import cmd_action, cmd_minpath
from latticeldp.cli.simulate import cmd_simulate, cmd_trajectory
from latticeldp.cli.ldp_check import cmd_ldp_check
from latticeldp.exceptions import LatticeLDPError

# logging
import pkg_resources
import logging
import logging.config
logging.config.fileConfig(pkg_resources.resource_filename(__name__, "logging.conf"),
                          disable_existing_loggers=False)
logger = logging.getLogger(__name__)


def get_parser():
    parser = argh.ArghParser(prog='latticeldp')
    parser.add_commands([
        # available commands
        cmd_rate,
        cmd_action,
        cmd_minpath,
        cmd_simulate,
        cmd_trajectory,
        cmd_ldp_check,
    ])
    return parser


def main(argv=None):
    parser = get_parser()
    try:
        argh.dispatch(parser, argv=argv)
    except LatticeLDPError as e:
        logger.debug("command failed", exc_info=True)
        print(e.error_line(), file=sys.stderr)
        sys.exit(e.exit_code)


if __name__ == '__main__':
    main()
