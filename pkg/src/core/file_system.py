"""
File system operations for run outputs.

Pure functions for resolving the output directory and writing report files.
"""

import os
from pathlib import Path
from typing import Optional, Tuple, Union

OUTPUT_DIR_ENV = "FRACLAYER_OUTPUT_DIR"


def get_output_dir(configured: Union[str, Path]) -> Path:
    """
    Resolve the output directory.

    The FRACLAYER_OUTPUT_DIR environment variable overrides the configured
    value.

    Example:
        >>> "results" in str(get_output_dir("results")) or OUTPUT_DIR_ENV in os.environ
        True
    """
    override = os.environ.get(OUTPUT_DIR_ENV)
    if override:
        return Path(override).expanduser()
    return Path(configured).expanduser()


def ensure_directory_exists(path: Path) -> Tuple[bool, Optional[str]]:
    """
    Ensure directory exists, creating if necessary.

    Args:
        path: Directory path

    Returns:
        Tuple of (success, error_message)
    """
    try:
        path.mkdir(parents=True, exist_ok=True)
        return True, None
    except PermissionError:
        return False, f"Permission denied: {path}"
    except OSError as e:
        return False, f"Failed to create directory: {e}"


def check_write_permission(path: Path) -> bool:
    """True if the directory is writable."""
    try:
        return os.access(path, os.W_OK)
    except OSError:
        return False


def save_text_file(content: str, directory: Path, filename: str) -> Tuple[bool, Optional[str], Optional[Path]]:
    """
    Save a report file under the output directory.

    Lines end in '\\n' on every platform.

    Args:
        content: File content
        directory: Output directory, created if missing
        filename: File name inside the directory

    Returns:
        Tuple of (success, error_message, file_path)

    Example:
        >>> import tempfile
        >>> ok, error, path = save_text_file("a,b\\n", Path(tempfile.mkdtemp()), "t.csv")
        >>> ok
        True
    """
    success, error = ensure_directory_exists(directory)
    if not success:
        return False, error, None

    if not check_write_permission(directory):
        return False, f"No write permission to {directory}", None

    target_path = directory / filename
    try:
        with open(target_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        return True, None, target_path
    except PermissionError:
        return False, f"Permission denied writing to {target_path}", None
    except OSError as e:
        return False, f"Failed to write file: {e}", None

