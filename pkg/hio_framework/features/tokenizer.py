import re

_PUNCTUATION = re.compile(r"[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Lowercases, drops every character that is neither a word character nor
    whitespace, then splits on whitespace."""
    return _PUNCTUATION.sub("", text.lower()).split()
