import os
import platform
import sys


class syslib:
    @staticmethod
    def get_platform():
        return platform.system()

    @staticmethod
    def cpu_count():
        # cores this process may actually run on
        if hasattr(os, 'sched_getaffinity'):
            return len(os.sched_getaffinity(0))
        return os.cpu_count() or 1

    @staticmethod
    def host_info():
        """
        Host description embedded in report metadata.
        """
        return {
            'host': platform.node(),
            'os': syslib.get_platform(),
            'machine': platform.machine(),
            'python': '.'.join(map(str, sys.version_info[:3])),
            'cpus': syslib.cpu_count(),
        }
