from concurrent.futures.thread import ThreadPoolExecutor
from typing import Callable, List, Tuple

from loglib.loglib import loglib
from misclib import try_catch


class threadlib:
    """
    Runs the two loopback parties as concurrent execution contexts.
    """

    slogger = loglib(__name__)

    @staticmethod
    def run_pair(target0: Callable, target1: Callable, cb_fail: Callable = None) -> Tuple[object, object]:
        """
        Run both party callables in their own thread and join them.

        Parameters
        ----------
        target0 : Callable
            party 0 body, no arguments
        target1 : Callable
            party 1 body, no arguments
        cb_fail : Callable
            called with the exception as soon as one party fails, so the
            other can be unblocked (e.g. by closing the shared transport)

        Returns
        -------
        tuple
            (result of target0, result of target1)
        """

        # failures in the order they happened; the first one is the root cause
        failures: List[Exception] = []

        def guarded(party, target):
            ret, err = try_catch(target)()
            if err is not None:
                threadlib.slogger.error(f'party {party} {type(err).__name__}!!! {err}')
                failures.append(err)
                if cb_fail:
                    cb_fail(err)
            return ret

        with ThreadPoolExecutor(max_workers=2, thread_name_prefix='party') as executor:
            future0 = executor.submit(guarded, 0, target0)
            future1 = executor.submit(guarded, 1, target1)
            ret0, ret1 = future0.result(), future1.result()

        if failures:
            raise failures[0]

        return ret0, ret1
