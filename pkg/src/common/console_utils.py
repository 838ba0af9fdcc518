"""
Shared diagnostic console
Library modules report through here; output is shown only in verbose mode
"""
from rich.console import Console

console = Console(stderr=True)

_verbose = False


def set_verbose(enabled: bool) -> None:
    """Enable or disable diagnostic output"""
    global _verbose
    _verbose = enabled


def log(message: str) -> None:
    """
    Print a diagnostic line (rich markup allowed)

    Args:
        message: Message to print when verbose mode is on
    """
    if _verbose:
        console.print(message)
