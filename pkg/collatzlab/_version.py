"""
Versioning: a hard-coded version number, bumped before each release. For
dev installs from a git checkout, the commit distance and hash are appended.
"""

import logging
import subprocess
from pathlib import Path


# The build system detects this definition when building a distribution.
__version__ = "0.3.0"

project_name = "collatzlab"

logger = logging.getLogger(project_name)

repo_dir = Path(__file__).parents[1]
repo_dir = repo_dir if repo_dir.joinpath(".git").is_dir() else None


def get_version():
    """Get the version string, extended with git info in a dev checkout."""
    if not repo_dir:
        return __version__
    try:
        p = subprocess.run(
            ["git", "describe", "--long", "--always", "--tags", "--dirty"],
            cwd=repo_dir,
            capture_output=True,
        )
    except Exception as err:
        logger.warning(f"Could not get {project_name} version: {err}")
        return __version__
    if p.returncode:
        return __version__

    parts = p.stdout.decode(errors="ignore").strip().lstrip("v").split("-")
    if len(parts) <= 2:
        # No tags, only the hash and maybe 'dirty'
        release, post, labels = __version__, None, parts
    else:
        release, post, *labels = parts
        if release != __version__:
            logger.warning(
                f"{project_name} version from git ({release}) and __version__ ({__version__}) don't match."
            )

    version = release
    if post and post != "0":
        version += f".post{post}"
    if labels:
        version += "+" + ".".join(labels)
    return version


__version__ = get_version()

version_info = tuple(
    int(i) if i.isnumeric() else i for i in __version__.split("+")[0].split(".")
)
