import datetime
import sys


class printlib:

    @staticmethod
    def get_caller_info(level: int = 1):
        """
        Return "<timestamp> [Class.method#line]" for the frame `level` steps up.

        sys._getframe is used instead of inspect.stack(): the latter reads source
        files for every frame and is far too slow for per-layer logging.
        """

        try:
            frame = sys._getframe(level)
        except ValueError:
            frame = sys._getframe(1)

        the_self = frame.f_locals.get('self')
        the_class = the_self.__class__.__name__ if the_self is not None else None
        the_method = frame.f_code.co_name
        the_line_number = frame.f_lineno
        timestamp = datetime.datetime.now().strftime('%Y%m%d_%H%M%S.%f')[:-3]

        if the_class:
            return "{} [{}.{}#{}]".format(timestamp, the_class, the_method, the_line_number)
        else:
            return "{} [{}#{}]".format(timestamp, the_method, the_line_number)

    @staticmethod
    def draw_percent(percent: float, text: str, bar_len: int = 20, stream=None):
        stream = stream or sys.stderr
        filled = int(bar_len * percent)
        progress = '=' * filled + ' ' * (bar_len - filled)
        stream.write(f'\r[ {progress} ] {percent * 100:.2f}%...{text}...')
        if percent >= 1:
            stream.write('\n')
        stream.flush()
