"""Bundled demo grammar, lexicon, interface rules, and test suite."""

from importlib import resources


def path(name):
    """Filesystem path of a bundled data file, e.g. ``demo.idlp`` or
    ``suite/subjects.suite``."""
    root = resources.files(__package__)
    target = root.joinpath(name)
    if not target.is_file():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return str(target)


def suite_paths():
    root = resources.files(__package__).joinpath("suite")
    return sorted(str(p) for p in root.iterdir() if str(p).endswith(".suite"))
