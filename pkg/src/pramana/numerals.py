"""Locale-aware numeral normalization and absence-phrase detection.

Covers the four benchmark languages (EN, HI, ZH, ES):

- ASCII digits with locale grouping ("1,234" in EN/HI/ZH, "1.234" in ES,
  plus the Indian 2-2-3 comma grouping for HI)
- Devanagari digits
- Chinese numerals, including wan (10^4) / yi (10^8) groupings and mixed
  Arabic-digit forms like "3万"
- spelled-out units 0-20 per language

Anything else - decimals, negatives, malformed groupings, plain words - is
"not a numeral" and reported as None rather than an error. Spelled-out
numbers above twenty are deliberately out of scope; the benchmark templates
control numeral rendering.

The word, noun, and absence-pattern tables ship as TSV files under data/.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

__all__ = [
    "LANGS",
    "normalize_numeral",
    "render_numeral",
    "detect_absence_phrase",
    "count_references",
    "numeral_tokens",
    "normalize_text",
    "result_nouns",
]

LANGS = ("EN", "HI", "ZH", "ES")

_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Casefold and collapse runs of whitespace; the comparison form."""
    return _WS_RE.sub(" ", text).casefold().strip()


def _check_lang(lang: str) -> str:
    lang = lang.upper()
    if lang not in LANGS:
        raise ValueError(f"unsupported language {lang!r}; expected one of {LANGS}")
    return lang


def _read_tsv(name: str) -> list[list[str]]:
    text = (resources.files("pramana") / "data" / name).read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        if line and not line.startswith("#"):
            rows.append(line.split("\t"))
    return rows


@lru_cache(maxsize=None)
def _number_words(lang: str) -> dict[str, int]:
    table = {}
    for row_lang, word, value in _read_tsv("number_words.tsv"):
        if row_lang == lang:
            table[word.casefold()] = int(value)
    return table


@lru_cache(maxsize=None)
def _absence_patterns(lang: str) -> list[re.Pattern]:
    return [
        re.compile(pattern)
        for row_lang, pattern in _read_tsv("absence_patterns.tsv")
        if row_lang == lang
    ]


@lru_cache(maxsize=None)
def result_nouns(lang: str) -> tuple[str, ...]:
    return tuple(
        noun for row_lang, noun in _read_tsv("result_nouns.tsv") if row_lang == lang
    )


# --- digit systems -----------------------------------------------------------

_DEVANAGARI_TRANS = str.maketrans("०१२३४५६७८९", "0123456789")

_ZH_DIGITS = {
    "零": 0, "〇": 0, "一": 1, "幺": 1, "二": 2, "两": 2, "兩": 2,
    "三": 3, "四": 4, "五": 5, "六": 6, "七": 7, "八": 8, "九": 9,
}
_ZH_SMALL_UNITS = {"十": 10, "拾": 10, "百": 100, "佰": 100, "千": 1000, "仟": 1000}
_ZH_BIG_UNITS = {"万": 10**4, "萬": 10**4, "亿": 10**8, "億": 10**8}
# standalone 2 renders as the counting form used before measure words
_ZH_HANZI_0_20 = (
    "零 一 两 三 四 五 六 七 八 九 十 十一 十二 十三 十四 十五 十六 十七 十八 十九 二十"
).split(" ")

# western 3-digit comma grouping, e.g. 1,234,567
_GROUP3 = re.compile(r"^\d{1,3}(?:,\d{3})+$")
# Indian 2-2-3 comma grouping, e.g. 1,23,456
_GROUP_INDIAN = re.compile(r"^\d{1,2}(?:,\d{2})*,\d{3}$")
# Spanish 3-digit dot grouping, e.g. 1.234.567
_GROUP3_DOT = re.compile(r"^\d{1,3}(?:\.\d{3})+$")
_PLAIN = re.compile(r"^\d+$")


def _parse_grouped_ascii(token: str, lang: str) -> int | None:
    if _PLAIN.match(token):
        return int(token)
    if lang == "ES":
        if _GROUP3_DOT.match(token):
            return int(token.replace(".", ""))
        return None
    if _GROUP3.match(token):
        return int(token.replace(",", ""))
    if lang == "HI" and _GROUP_INDIAN.match(token):
        return int(token.replace(",", ""))
    return None


def _parse_zh(token: str) -> int | None:
    """Chinese numerals, hanzi or mixed with Arabic digits ("3万", "一亿")."""
    total = 0
    section = 0
    number = 0
    seen = False
    for ch in token:
        if ch.isdigit() and ch.isascii():
            number = number * 10 + int(ch)
            seen = True
        elif ch in _ZH_DIGITS:
            number = number * 10 + _ZH_DIGITS[ch]
            seen = True
        elif ch in _ZH_SMALL_UNITS:
            section += (number or 1) * _ZH_SMALL_UNITS[ch]
            number = 0
            seen = True
        elif ch in _ZH_BIG_UNITS:
            sec = section + number
            total += (sec or 1) * _ZH_BIG_UNITS[ch]
            section = 0
            number = 0
            seen = True
        elif ch == ",":
            continue
        else:
            return None
    if not seen:
        return None
    return total + section + number


def normalize_numeral(token: str, lang: str) -> int | None:
    """Resolve a numeral token to a non-negative integer, or None.

    None is the "not a numeral" value, not an error: decimals, negative
    numbers, and arbitrary words all land there.
    """
    lang = _check_lang(lang)
    token = token.strip()
    if not token:
        return None

    word = _number_words(lang).get(token.casefold())
    if word is not None:
        return word

    if lang == "HI":
        token = token.translate(_DEVANAGARI_TRANS)

    value = _parse_grouped_ascii(token, lang)
    if value is not None:
        return value

    if lang == "ZH":
        return _parse_zh(token)
    return None


def render_numeral(n: int, lang: str) -> str:
    """Locale rendering of a non-negative integer; the exact inverse of
    normalize_numeral for every value in [0, 10^8]."""
    lang = _check_lang(lang)
    if n < 0:
        raise ValueError("only non-negative integers are rendered")
    if lang == "EN":
        return f"{n:,}"
    if lang == "ES":
        return f"{n:,}".replace(",", ".")
    if lang == "HI":
        digits = str(n)
        if len(digits) > 3:
            head, tail = digits[:-3], digits[-3:]
            groups = []
            while len(head) > 2:
                groups.insert(0, head[-2:])
                head = head[:-2]
            if head:
                groups.insert(0, head)
            digits = ",".join(groups + [tail])
        return digits.translate(str.maketrans("0123456789", "०१२३४५६७८९"))
    # ZH: hanzi for small counts, wan/yi groupings for round magnitudes,
    # plain grouped digits otherwise
    if n <= 20:
        return _ZH_HANZI_0_20[n]
    if n % 10**8 == 0:
        return f"{n // 10**8}亿"
    if n % 10**4 == 0:
        return f"{n // 10**4}万"
    return f"{n:,}"


# --- scanning free text ------------------------------------------------------

_NUM_TOKEN_RES = {
    "EN": re.compile(r"\d[\d,]*(?:\.\d+)?"),
    "ES": re.compile(r"\d[\d.]*(?:,\d+)?"),
    "HI": re.compile(r"[०-९\d][०-९\d,]*(?:\.\d+)?"),
    "ZH": re.compile(r"[0-9零〇一两兩二三四五六七八九十百千万萬亿億,]+"),
}


def numeral_tokens(text: str, lang: str) -> list[tuple[str, int]]:
    """All (token, value) numerals in the text that normalize to integers."""
    lang = _check_lang(lang)
    out = []
    for m in _NUM_TOKEN_RES[lang].finditer(text):
        value = normalize_numeral(m.group(0), lang)
        if value is not None:
            out.append((m.group(0), value))
    return out


@lru_cache(maxsize=None)
def _count_ref_re(lang: str) -> re.Pattern:
    nouns = "|".join(re.escape(n) for n in result_nouns(lang))
    num = _NUM_TOKEN_RES[lang].pattern
    if lang == "ZH":
        # numeral, optional measure word, then the noun
        return re.compile(rf"(?P<num>{num})\s*[封个條条场場次位则個]?\s*(?:{nouns})")
    # digit forms or spelled units, at most one intervening word, then the noun
    words = "|".join(re.escape(w) for w in _number_words(lang))
    return re.compile(
        rf"(?P<num>{num}|\b(?:{words})\b)\s+(?:\w+\s+)?(?:{nouns})", re.IGNORECASE
    )


def count_references(text: str, lang: str) -> list[int]:
    """Numerals positioned as result counts: adjacent to a tool-result noun.

    Adjacency is deliberately strict (numeral, optionally one word, then a
    noun from the per-language table) so that dates, times, and prices in
    the same sentence are not mistaken for count claims.
    """
    lang = _check_lang(lang)
    counts = []
    for m in _count_ref_re(lang).finditer(text):
        value = normalize_numeral(m.group("num"), lang)
        if value is not None:
            counts.append(value)
    return counts


def detect_absence_phrase(text: str, lang: str) -> bool:
    """True iff the text matches the per-language absence pattern table."""
    lang = _check_lang(lang)
    normalized = normalize_text(text)
    return any(p.search(normalized) for p in _absence_patterns(lang))
