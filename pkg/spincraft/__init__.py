import pathlib

__version__ = "0.1.0"
__configversion__ = "1.0.0"


homepath = pathlib.Path.home().joinpath(".spincraft")
