"""
ANSI colourise the logging stream (works on LINUX/UNIX based systems).

Format strings may contain colour placeholders between braces, they are
substituted after the normal ``%`` formatting of the record:

 - ``{lvl}``: background colour per log level, for ``%(levelname)s``.
 - ``{msg}``: foreground colour per log level, for the message.
 - ``{verdict}``: green or red for records carrying a ``verdict`` extra,
   empty for other records.
 - ``{reset}``: back to the terminal default, appended automatically.

*Constants for colours*: BLACK, RED, GREEN, YELLOW, BLUE, MAGENTA, CYAN, WHITE
"""

import logging
import string

BLACK, RED, GREEN, YELLOW, BLUE, MAGENTA, CYAN, WHITE = range(8)

RESET = "\x1b[0m"

#: Colour schemes, per log level a tuple of (foreground, background, bold).
DEFAULT_COLOURS = {
    'lvl': {
        logging.DEBUG: (WHITE, BLUE, False),
        logging.INFO: (BLACK, GREEN, False),
        logging.WARNING: (BLACK, YELLOW, False),
        logging.ERROR: (WHITE, RED, False),
        logging.CRITICAL: (YELLOW, RED, True),
    },
    'msg': {
        logging.DEBUG: (BLUE, None, False),
        logging.INFO: (GREEN, None, False),
        logging.WARNING: (YELLOW, None, False),
        logging.ERROR: (RED, None, False),
        logging.CRITICAL: (RED, None, True),
    }
}

#: Colours for passed and failed verdict records.
VERDICT_COLOURS = {True: (GREEN, None, True), False: (RED, None, True)}


def ansi(foreground=None, background=None, bold=False):
    """
    Make an ANSI escape sequence.

    :param int foreground: Foreground colour constant or None.
    :param int background: Background colour constant or None.
    :param bool bold: Bold face.
    :return str: The escape sequence, empty if nothing is set.
    """
    props = []
    if background is not None:
        props.append(str(background + 40))
    if foreground is not None:
        props.append(str(foreground + 30))
    if bold:
        props.append('1')
    if not props:
        return ""
    return "\x1b[%sm" % ';'.join(props)


class _Template(string.Template):
    """Template with ``{name}`` placeholders, leaves ``$`` alone."""

    delimiter = '{'
    pattern = (
        r'\{(?:(?P<escaped>\{)|(?P<named>[_a-z][_a-z0-9]*)\}|'
        r'(?P<braced>[_a-z][_a-z0-9]*)\}|(?P<invalid>))'
    )


class ColourFormatter(logging.Formatter):
    """
    ANSI colourise the logging stream.

    .. code-block:: python

        handler = logging.StreamHandler()
        handler.setFormatter(
            ColourFormatter("{lvl}[%(levelname)s]{reset} {msg}%(message)s")
        )

    :kwarg dict colours: Replacement for :data:`DEFAULT_COLOURS`.
    """

    def __init__(self, *args, **kwargs):
        self.colours = kwargs.pop('colours', DEFAULT_COLOURS)
        super(ColourFormatter, self).__init__(*args, **kwargs)
        if not self._style._fmt.endswith("{reset}"):
            self._style._fmt += "{reset}"

    def colour_box(self, record):
        """
        Make the placeholder mapping for one record.

        :param logging.LogRecord record: The record being formatted.
        :return dict: Placeholder name to escape sequence.
        """
        box = {'reset': RESET, 'verdict': ""}
        for scheme, levels in self.colours.items():
            box[scheme] = ansi(*levels.get(record.levelno, (None, None, False)))
        verdict = getattr(record, 'verdict', None)
        if verdict is not None:
            box['verdict'] = ansi(*VERDICT_COLOURS[bool(verdict)])
        return box

    def format(self, record):
        """
        Format the record, then substitute the colour placeholders.

        :param logging.LogRecord record: The log record.
        """
        formatted = super(ColourFormatter, self).format(record)
        return _Template(formatted).safe_substitute(self.colour_box(record))
