"""Words in the mirror generators P, Q, R.

A word is stored as a plain ``str`` over the alphabet ``"PQR"``.  Every
letter is an involution, so free reduction only cancels equal neighbours
and the inverse of a word is its reversal.
"""
from __future__ import annotations

import re

ALPHABET = "PQR"
LETTER_INDEX = {c: i for i, c in enumerate(ALPHABET)}

Word = str


class WordSyntaxError(ValueError):
    pass


def free_reduce(word: Word) -> Word:
    stack: list[str] = []
    for c in word:
        if stack and stack[-1] == c:
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


def inverse(word: Word) -> Word:
    return word[::-1]


def mul(*words: Word) -> Word:
    return free_reduce("".join(words))


def conjugate(word: Word, by: Word) -> Word:
    """Return ``by * word * by^-1``."""
    return mul(by, word, inverse(by))


def to_indices(word: Word) -> tuple[int, ...]:
    return tuple(LETTER_INDEX[c] for c in word)


_TOKEN = re.compile(r"\s*(?:([PQR])|(\()|(\))|(\^\s*\d+))")


def parse_word(text: str) -> Word:
    """Parse the textual syntax, e.g. ``"(RQ)^3R"`` or ``"PRQRP"``.

    Parenthesised factors may be nested and raised to a power with ``^n``.
    The empty string, ``"1"`` and ``"e"`` denote the identity.  The result is
    freely reduced.
    """
    src = text.strip()
    if src in ("", "1", "e", "ε"):
        return ""
    pos = 0
    stack: list[list[str]] = [[]]
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {src[pos]!r} in {text!r}")
        letter, lpar, rpar, power = m.groups()
        pos = m.end()
        if letter:
            stack[-1].append(letter)
        elif lpar:
            stack.append([])
        elif rpar:
            if len(stack) == 1:
                raise WordSyntaxError(f"unbalanced ')' in {text!r}")
            group = "".join(stack.pop())
            stack[-1].append(f"({group})")
        else:
            n = int(power[1:].strip())
            if not stack[-1]:
                raise WordSyntaxError(f"'^' without a factor in {text!r}")
            last = stack[-1].pop()
            if last.startswith("("):
                last = last[1:-1]
            stack[-1].append(last * n)
    if len(stack) != 1:
        raise WordSyntaxError(f"unbalanced '(' in {text!r}")
    flat = "".join(stack[0]).replace("(", "").replace(")", "")
    return free_reduce(flat)


def format_word(word: Word, compress: bool = True) -> str:
    """Render a word; with ``compress`` runs of a repeated two-letter factor
    are written as ``(XY)^n``.  ``parse_word(format_word(w)) == w`` for every
    reduced word ``w``."""
    if not word:
        return "1"
    if not compress:
        return word
    out: list[str] = []
    i = 0
    n = len(word)
    while i < n:
        if i + 3 < n and word[i + 2] == word[i] and word[i + 3] == word[i + 1]:
            j = i + 2
            while j + 1 < n and word[j] == word[i] and word[j + 1] == word[i + 1]:
                j += 2
            reps = (j - i) // 2
            out.append(f"({word[i:i + 2]})^{reps}")
            i = j
        else:
            out.append(word[i])
            i += 1
    return "".join(out)


def word_ball(radius: int, letters: str = ALPHABET) -> list[Word]:
    """All reduced words of length at most ``radius``, shortest first."""
    ball = [""]
    frontier = [""]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for c in letters:
                if not w or w[-1] != c:
                    nxt.append(w + c)
        ball.extend(nxt)
        frontier = nxt
    return ball
