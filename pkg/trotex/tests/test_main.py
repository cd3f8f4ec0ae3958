"""
Test the command line argument parser.
"""

# pylint: disable=no-self-use

import pytest
import trotex
from trotex.__main__ import COMMANDS, get_cli_arg_parser


class TestArgParser(object):
    """
    Test the arguments of the ``trotex`` command.
    """
    def test_defaults(self):
        """
        Test the defaults of a plain ``run``.
        """
        args = get_cli_arg_parser().parse_args(['run', 'chain.json'])
        assert (args.command, args.target) == ('run', 'chain.json')
        assert args.threads == 2
        assert args.seed == 0
        assert args.out is None
        assert args.delta == trotex.DEFAULT_DELTA
        assert args.logdir is None

    def test_options(self):
        """
        Test the options.
         - ``-v`` is counted.
         - ``-l`` without a directory uses the default log directory.
        """
        args = get_cli_arg_parser().parse_args(
            ['suite', 'overrides', '-t', '0', '--seed', '5', '--out', 'out',
             '-vvv', '-l'])
        assert args.threads == 0
        assert args.seed == 5
        assert args.out == 'out'
        assert args.verbose == 3
        assert args.logdir == trotex.LOG_DIR

    @pytest.mark.parametrize("argv", [
        ['simulate', 'chain.json'],
        ['run'],
    ])
    def test_invalid(self, argv):
        """
        Test that unknown commands and a missing target exit.
        """
        with pytest.raises(SystemExit):
            get_cli_arg_parser().parse_args(argv)

    def test_commands(self):
        """
        Test that every command is accepted.
        """
        for command in COMMANDS:
            assert get_cli_arg_parser().parse_args(
                [command, 'target']).command == command
