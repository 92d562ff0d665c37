from pathlib import Path

from filelib import FILE_FMT, SUFFIX_FMT
from loglib.loglib import loglib


class filelib:
    slogger = loglib(__name__)

    @staticmethod
    def file_write_binary(buf: bytearray, file_name: str):
        """
         write file in binary mode.

        Parameters
        ----------
        buf : bytearray
            write buffer
        file_name : str
            file name

        Returns
        -------
        bool
            write status
        """

        ret = True

        while True:
            if not file_name:
                filelib.slogger.error('file_name is None or empty!!!')
                ret = False
                break
            if buf is None:
                filelib.slogger.error('buf is None!!!')
                ret = False
                break
            if not isinstance(buf, (bytes, bytearray, memoryview)):
                filelib.slogger.error(f'buf is {type(buf).__name__}, not bytes!!!')
                ret = False
                break

            try:
                loglib.create_parent_folder(file_name)
                with open(file_name, 'wb') as f:
                    f.write(buf)
            except (IOError, OSError) as e:
                filelib.slogger.error('Cannot open or write file ({})..'.format(e))
                ret = False

            break

        filelib.slogger.d('write {} ret: {}'.format(file_name, ret))
        return ret

    @staticmethod
    def file_read_binary(file_name: str):
        """
         read file in binary mode.

        Parameters
        ----------
        file_name : str
            file name

        Returns
        -------
        bytes
            read buffer, None on failure
        """

        buf = None

        while True:
            if not file_name:
                filelib.slogger.error('file_name is None or empty!!!')
                break

            try:
                with open(file_name, "rb") as f:
                    buf = f.read()
            except (IOError, OSError) as e:
                filelib.slogger.error('Cannot open or read file ({})..'.format(e))

            break

        return buf

    @staticmethod
    def file_write_text(text: str, file_name: str):
        if text is None:
            filelib.slogger.error('text is None!!!')
            return False
        return filelib.file_write_binary(bytearray(text.encode()), file_name)

    @staticmethod
    def get_format(file_name: str):
        path = Path(file_name)
        if path.is_dir():
            return FILE_FMT.FOLDER
        return SUFFIX_FMT.get(path.suffix.lower(), FILE_FMT.TEXT)
