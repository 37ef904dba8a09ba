"""
Line-oriented run reports.

A report is a sequence of `key: value` lines in insertion order, closed by a
`digest:` line holding the SHA-256 of everything above it. Reports carry no
timestamps so that identical inputs give identical bytes.
"""
from src import __version__
from src.utils import calculate_checksum, write_text


class RunReport:
    def __init__(self, command):
        self.lines = []
        self.add("tool", f"garland {__version__}")
        self.add("command", command)

    def add(self, key, value):
        text = str(value)
        if "\n" in text:
            text = text.replace("\n", " ")
        self.lines.append(f"{key}: {text}")
        return self

    def add_params(self, params):
        self.add("params.m", params.m)
        self.add("params.n", params.n)
        self.add("params.boundary", str(params.p_is_boundary).lower())
        self.add("params.ring", params.ring)
        self.add("params.sign_rule", params.sign_rule)
        return self

    def render(self):
        body = "".join(line + "\n" for line in self.lines)
        return body + f"digest: {calculate_checksum(body)}\n"

    def save(self, path):
        write_text(path, self.render())


def verify_digest(text):
    """True if the closing digest line matches the report body."""
    body, _, last = text.rstrip("\n").rpartition("\n")
    if not last.startswith("digest: "):
        return False
    return calculate_checksum(body + "\n") == last[len("digest: "):]
