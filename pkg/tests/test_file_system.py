"""Tests for file system operations."""

import os
import tempfile
from pathlib import Path
from unittest.mock import patch

from src.core.file_system import (
    OUTPUT_DIR_ENV,
    check_write_permission,
    ensure_directory_exists,
    get_output_dir,
    save_text_file,
)


class TestGetOutputDir:
    """Test resolving the output directory."""

    def test_configured(self):
        """Test the configured directory without an override."""
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop(OUTPUT_DIR_ENV, None)
            assert get_output_dir("results") == Path("results")

    def test_environment_override(self):
        """Test FRACLAYER_OUTPUT_DIR wins over the configuration."""
        with patch.dict(os.environ, {OUTPUT_DIR_ENV: "/tmp/elsewhere"}):
            assert get_output_dir("results") == Path("/tmp/elsewhere")

    def test_empty_override_ignored(self):
        """Test an empty variable falls back to the configuration."""
        with patch.dict(os.environ, {OUTPUT_DIR_ENV: ""}):
            assert get_output_dir("out") == Path("out")

    def test_expands_user(self):
        """Test '~' is expanded."""
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop(OUTPUT_DIR_ENV, None)
            assert "~" not in str(get_output_dir("~/results"))


class TestEnsureDirectoryExists:
    """Test directory creation."""

    def test_create_new_directory(self):
        """Test creating a new directory."""
        with tempfile.TemporaryDirectory() as tmpdir:
            test_dir = Path(tmpdir) / "test" / "nested" / "dir"
            success, error = ensure_directory_exists(test_dir)

            assert success is True
            assert error is None
            assert test_dir.exists()

    def test_existing_directory(self):
        """Test with existing directory."""
        with tempfile.TemporaryDirectory() as tmpdir:
            success, error = ensure_directory_exists(Path(tmpdir))

            assert success is True
            assert error is None

    def test_path_is_a_file(self):
        """Test a file in the way."""
        with tempfile.TemporaryDirectory() as tmpdir:
            blocker = Path(tmpdir) / "blocker"
            blocker.write_text("x")
            success, error = ensure_directory_exists(blocker / "sub")

            assert success is False
            assert error


class TestCheckWritePermission:
    """Test write permission checking."""

    def test_writable_directory(self):
        """Test a temporary directory is writable."""
        with tempfile.TemporaryDirectory() as tmpdir:
            assert check_write_permission(Path(tmpdir)) is True


class TestSaveTextFile:
    """Test writing report files."""

    def test_save(self):
        """Test content and path of a saved file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            success, error, path = save_text_file("x,y\n1,2\n", Path(tmpdir) / "results", "a.csv")

            assert success is True
            assert error is None
            assert path == Path(tmpdir) / "results" / "a.csv"
            assert path.read_bytes() == b"x,y\n1,2\n"

    def test_overwrites(self):
        """Test a second write replaces the file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            save_text_file("old\n", Path(tmpdir), "a.json")
            success, _, path = save_text_file("new\n", Path(tmpdir), "a.json")

            assert success is True
            assert path.read_text() == "new\n"

    def test_unwritable_target(self):
        """Test a directory where the file should be."""
        with tempfile.TemporaryDirectory() as tmpdir:
            (Path(tmpdir) / "a.csv").mkdir()
            success, error, path = save_text_file("x\n", Path(tmpdir), "a.csv")

            assert success is False
            assert error
            assert path is None
