import logging
import os
import sys

from loglib import LOG_LEVELS
from loglib.printlib import printlib


class loglib:
    """
    Per-module logger wrapper.

    Console output goes to stderr so report text on stdout stays parseable.
    The level is shared by every loglib instance and set once via configure().
    """

    level = logging.WARNING
    logfile = None
    _filehandler = None

    def __init__(self, module: str = None):
        # get logger per module
        self.module = module
        self.logger = logging.getLogger(module)
        self.logger.setLevel(loglib.level)
        self.logger.propagate = False
        self.formatter = logging.Formatter('%(message)s')

        # console handler init
        self.consolehandler = None

    @staticmethod
    def configure(level: str = 'WARNING', logfile: str = None):
        """
        Set process-wide level and optional log file for every loglib logger.

        Parameters
        ----------
        level : str
            one of LOG_LEVELS
        logfile : str
            path of a log file shared by all loggers, None for console only
        """

        if level not in LOG_LEVELS:
            raise ValueError(f'unknown log level: {level}')
        loglib.level = getattr(logging, level)

        old_handler = loglib._filehandler
        loglib._filehandler = None
        loglib.logfile = logfile
        if logfile:
            loglib.create_parent_folder(logfile)
            loglib._filehandler = logging.FileHandler(logfile)
            loglib._filehandler.setFormatter(logging.Formatter('%(message)s'))

        # refresh loggers that already started their console
        for logger in list(logging.Logger.manager.loggerDict.values()):
            if not isinstance(logger, logging.Logger) or not getattr(logger, '_loglib', False):
                continue
            logger.setLevel(loglib.level)
            if old_handler:
                logger.removeHandler(old_handler)
            if loglib._filehandler:
                logger.addHandler(loglib._filehandler)

        if old_handler:
            old_handler.close()

    def _init_console(log):
        """
        init_console decorator
        """
        def func(self, msg: str = ''):
            self.init_console()
            log(self, msg)
        return func

    def init_console(self):
        if not self.consolehandler:
            self.start_console()

    def start_console(self):
        """
        [symptom] deepcopy of an object holding a loglib fails with
            TypeError: cannot pickle '_thread.RLock' object
        [solution] create the stream handler lazily, on first log call
        """
        self.logger._loglib = True
        self.logger.setLevel(loglib.level)
        # loggers are shared by name, so is their console handler
        shared = getattr(self.logger, '_loglib_console', None)
        if shared:
            self.consolehandler = shared
        else:
            self.consolehandler = logging.StreamHandler(sys.stderr)
            self.consolehandler.setFormatter(self.formatter)
            self.logger.addHandler(self.consolehandler)
            self.logger._loglib_console = self.consolehandler
        if loglib._filehandler and loglib._filehandler not in self.logger.handlers:
            self.logger.addHandler(loglib._filehandler)

    @staticmethod
    def create_parent_folder(file_path: str):
        """
        create file's parent folder if not exist
        """
        folder = os.path.dirname(file_path)
        if folder and not os.path.exists(folder):
            import pathlib
            pathlib.Path(folder).mkdir(parents=True, exist_ok=True)

    def enabled(self, level: int):
        return self.logger.isEnabledFor(level)

    # region [just log]
    @_init_console
    def d(self, msg: str = ''):
        self.logger.debug(msg)

    @_init_console
    def i(self, msg: str = ''):
        self.logger.info(msg)

    @_init_console
    def w(self, msg: str = ''):
        self.logger.warning(msg)

    @_init_console
    def e(self, msg: str = ''):
        self.logger.error(msg)

    @_init_console
    def c(self, msg: str = ''):
        self.logger.critical(msg)

    # endregion [just log]

    # region [log with caller info]
    @_init_console
    def debug(self, msg: str = ''):
        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug('D/{} {}'.format(printlib.get_caller_info(3), msg))

    @_init_console
    def info(self, msg: str = ''):
        if self.logger.isEnabledFor(logging.INFO):
            self.logger.info('I/{} {}'.format(printlib.get_caller_info(3), msg))

    @_init_console
    def warning(self, msg: str = ''):
        self.logger.warning('W/{} {}'.format(printlib.get_caller_info(3), msg))

    @_init_console
    def error(self, msg: str = ''):
        self.logger.error('E/{} {}'.format(printlib.get_caller_info(3), msg))

    @_init_console
    def critical(self, msg: str = ''):
        self.logger.critical('C/{} {}'.format(printlib.get_caller_info(3), msg))

    # endregion [log with caller info]

    def close_console(self):
        if self.consolehandler:
            self.logger.removeHandler(self.consolehandler)
            self.consolehandler.flush()
            self.consolehandler = None
            self.logger._loglib_console = None
