"""
Logging handler that decides the exit code of ``trotex``.

It counts records per level and remembers the last verdict per acceptance
criterion. Verdicts are ordinary log records with ``verdict`` and
``criterion`` extras:

.. code-block:: python

    LOG.info("criterion %s passed", 3, extra={'criterion': 3, 'verdict': True})

Its string form is the summary logged at exit:

> Critical errors: 0, errors: 1, warnings: 2, verdicts passed: 10, failed: 1
"""
import logging


class ExitCodeTracker(logging.Handler):
    """Track log records per level and verdicts per criterion."""

    def __init__(self, level=logging.WARNING):
        """
        :param int level: Lowest level to count. Verdict records are tracked
            at any level.
        """
        super(ExitCodeTracker, self).__init__(logging.DEBUG)
        self.count_level = level
        self.logged = {'WARNING': 0, 'ERROR': 0, 'CRITICAL': 0}
        self.verdicts = {}

    def emit(self, record):
        """
        Count ``record`` and store its verdict if it has one.

        :param logging.LogRecord record: Record passed by the logger.
        """
        verdict = getattr(record, 'verdict', None)
        if verdict is not None:
            criterion = getattr(record, 'criterion', record.getMessage())
            self.verdicts[criterion] = bool(verdict)
        if record.levelno >= self.count_level:
            try:
                self.logged[record.levelname] += 1
            except KeyError:
                self.logged[record.levelname] = 1

    @property
    def errors_occurred(self):
        """
        :returns int: ERROR and CRITICAL records seen so far.
        """
        return self.logged['ERROR'] + self.logged['CRITICAL']

    @property
    def failed_verdicts(self):
        """
        Return the criteria whose last verdict was a failure.

        :returns list: Failed criterion identifiers, sorted.
        """
        return sorted(
            (key for key, passed in self.verdicts.items() if not passed),
            key=str
        )

    @property
    def exit_code(self):
        """0 iff no errors were logged and every verdict passed, else 1."""
        if self.errors_occurred or self.failed_verdicts:
            return 1
        return 0

    def __str__(self):
        """
        :returns str: Counts per level and of passed and failed verdicts.
        """
        passed = sum(1 for value in self.verdicts.values() if value)
        return (
            "Critical errors: {CRITICAL}, errors: {ERROR}, warnings: "
            "{WARNING}, verdicts passed: {passed}, failed: {failed}"
        ).format(
            passed=passed, failed=len(self.verdicts) - passed, **self.logged
        )
