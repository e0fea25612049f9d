import pytest
from hypothesis import given, settings, strategies as st

from pramana.numerals import (
    LANGS,
    count_references,
    detect_absence_phrase,
    normalize_numeral,
    numeral_tokens,
    render_numeral,
)

# hand-built oracle lists, one per language; every entry was worked out by
# hand before the parser was written
EN_ORACLE = {
    "0": 0, "1": 1, "2": 2, "3": 3, "4": 4, "5": 5, "6": 6, "7": 7, "8": 8,
    "9": 9, "10": 10, "11": 11, "15": 15, "20": 20, "42": 42, "100": 100,
    "999": 999, "1000": 1000, "1,234": 1234, "12,345": 12345,
    "123,456": 123456, "1,234,567": 1234567, "100,000,000": 100000000,
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20, "Twenty": 20, "THREE": 3, "  7  ": 7, "08": 8,
    "5,000": 5000, "50,000": 50000, "500,000": 500000, "2,000,000": 2000000,
    "19": 19,
}
ES_ORACLE = {
    "0": 0, "3": 3, "9": 9, "15": 15, "21": 21, "100": 100, "999": 999,
    "1.234": 1234, "12.345": 12345, "123.456": 123456, "1.234.567": 1234567,
    "100.000.000": 100000000, "5.000": 5000, "50.000": 50000,
    "cero": 0, "uno": 1, "una": 1, "un": 1, "dos": 2, "tres": 3,
    "cuatro": 4, "cinco": 5, "seis": 6, "siete": 7, "ocho": 8, "nueve": 9,
    "diez": 10, "once": 11, "doce": 12, "trece": 13, "catorce": 14,
    "quince": 15, "dieciséis": 16, "dieciseis": 16, "diecisiete": 17,
    "dieciocho": 18, "diecinueve": 19, "veinte": 20, "Veinte": 20,
    "DOS": 2, "  8 ": 8, "2.000.000": 2000000, "777": 777, "1000": 1000,
    "12": 12, "19": 19, "7": 7,
}
HI_ORACLE = {
    "०": 0, "१": 1, "२": 2, "३": 3, "४": 4, "५": 5, "६": 6, "७": 7,
    "८": 8, "९": 9, "१०": 10, "१५": 15, "२०": 20, "४२": 42, "१००": 100,
    "९९९": 999, "१,०००": 1000, "१२,३४५": 12345, "१,२३,४५६": 123456,
    "१,००,०००": 100000, "१०,००,०००": 1000000, "3": 3, "12": 12,
    "1,234": 1234, "1,23,456": 123456, "शून्य": 0, "एक": 1, "दो": 2,
    "तीन": 3, "चार": 4, "पाँच": 5, "पांच": 5, "छह": 6, "सात": 7, "आठ": 8,
    "नौ": 9, "दस": 10, "ग्यारह": 11, "बारह": 12, "तेरह": 13, "चौदह": 14,
    "पंद्रह": 15, "सोलह": 16, "सत्रह": 17, "अठारह": 18, "उन्नीस": 19,
    "बीस": 20, " ७ ": 7, "५००": 500, "२५": 25,
}
ZH_ORACLE = {
    "零": 0, "〇": 0, "一": 1, "二": 2, "两": 2, "兩": 2, "三": 3, "四": 4,
    "五": 5, "六": 6, "七": 7, "八": 8, "九": 9, "十": 10, "十一": 11,
    "十二": 12, "十五": 15, "十九": 19, "二十": 20, "二十三": 23,
    "三十": 30, "九十九": 99, "一百": 100, "二百三十": 230, "五千": 5000,
    "一千二百三十四": 1234, "三万": 30000, "3万": 30000, "12万": 120000,
    "十万": 100000, "一亿": 100000000, "1亿": 100000000, "2万3000": 23000,
    "3": 3, "42": 42, "100": 100, "3,000": 3000, "12,345": 12345,
    "456": 456, "一万": 10000, "万": 10000, "五百": 500, "八千": 8000,
    "二千零三": 2003, "一百零五": 105, "9": 9, "88": 88, "7": 7,
    "六十六": 66, "四千三百二十一": 4321, "10000": 10000,
}


@pytest.mark.parametrize("lang,oracle", [
    ("EN", EN_ORACLE), ("ES", ES_ORACLE), ("HI", HI_ORACLE), ("ZH", ZH_ORACLE),
])
def test_oracle_tables(lang, oracle):
    assert len(oracle) >= 45
    for token, expected in oracle.items():
        assert normalize_numeral(token, lang) == expected, (lang, token)


@pytest.mark.parametrize("lang,token", [
    ("EN", "hello"), ("EN", "3.5"), ("EN", "-3"), ("EN", ""), ("EN", "1,23"),
    ("EN", "thirty"),
    ("ES", "148,5"), ("ES", "1.5"), ("ES", "hola"), ("ES", "1.23"),
    ("HI", "नमस्ते"), ("HI", "३.५"),
    ("ZH", "你好"), ("ZH", ","), ("ZH", "3.5"),
])
def test_non_numeric_tokens(lang, token):
    assert normalize_numeral(token, lang) is None


def test_wan_grouping():
    assert normalize_numeral("3万", "ZH") == 30000


def test_devanagari_digit():
    assert normalize_numeral("३", "HI") == 3


def test_spanish_grouped_thousands():
    assert normalize_numeral("1.234", "ES") == 1234


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**8), st.sampled_from(LANGS))
def test_render_round_trip(n, lang):
    assert normalize_numeral(render_numeral(n, lang), lang) == n


@pytest.mark.parametrize("n,lang,expected", [
    (1234, "EN", "1,234"),
    (1234, "ES", "1.234"),
    (123456, "HI", "१,२३,४५६"),
    (3, "HI", "३"),
    (3, "ZH", "三"),
    (30000, "ZH", "3万"),
    (100000000, "ZH", "1亿"),
    (21, "ZH", "21"),
    (12345678, "ZH", "12,345,678"),
])
def test_render_examples(n, lang, expected):
    assert render_numeral(n, lang) == expected


def test_render_rejects_negative():
    with pytest.raises(ValueError):
        render_numeral(-1, "EN")


def test_unsupported_language_rejected():
    with pytest.raises(ValueError):
        normalize_numeral("3", "FR")


# --- absence phrases ---------------------------------------------------------

ABSENCE_POSITIVE = [
    ("No emails were found matching your query", "EN"),
    ("No results were found for your query.", "EN"),
    ("Nothing found.", "EN"),
    ("I could not find any messages from Bob.", "EN"),
    ("The search found no items.", "EN"),
    ("no se encontraron resultados", "ES"),
    ("No se encontraron correos que coincidan con su consulta.", "ES"),
    ("La búsqueda terminó sin resultados.", "ES"),
    ("आपकी क्वेरी के लिए कोई परिणाम नहीं मिला।", "HI"),
    ("आपकी क्वेरी के लिए कोई ईमेल नहीं मिला।", "HI"),
    ("कुछ नहीं मिला।", "HI"),
    ("未找到与您的查询匹配的邮件。", "ZH"),
    ("没有找到结果。", "ZH"),
    ("搜索没有结果。", "ZH"),
]

ABSENCE_NEGATIVE = [
    ("Alice sent you 3 emails", "EN"),
    ("Here are your results.", "EN"),
    ("Found 12 results for your query.", "EN"),
    ("Alice te envió 3 correos", "ES"),
    ("Aquí están los resultados.", "ES"),
    ("Alice ने आपको ३ ईमेल भेजे।", "HI"),
    ("ये रहे आपके परिणाम।", "HI"),
    ("Alice给您发送了三封邮件。", "ZH"),
    ("这是您的搜索结果。", "ZH"),
]


@pytest.mark.parametrize("text,lang", ABSENCE_POSITIVE)
def test_absence_detected(text, lang):
    assert detect_absence_phrase(text, lang)


@pytest.mark.parametrize("text,lang", ABSENCE_NEGATIVE)
def test_absence_not_detected(text, lang):
    assert not detect_absence_phrase(text, lang)


def test_absence_case_and_whitespace_insensitive():
    assert detect_absence_phrase("NO   RESULTS were returned", "EN")


# --- count references --------------------------------------------------------

COUNT_REF_CASES = [
    ("Alice sent you 3 emails about the launch.", "EN", [3]),
    ("You have 2 meetings tomorrow.", "EN", [2]),
    ("The search returned 12 results.", "EN", [12]),
    ("I found 4 new messages.", "EN", [4]),
    ("There are twelve items left.", "EN", [12]),
    ("He sent 3 emails and 2 messages.", "EN", [3, 2]),
    ("ACME closed at 148.5 today.", "EN", []),
    ("The review is at 3 PM on Friday.", "EN", []),
    ("Meeting room 12 is fully booked.", "EN", []),
    ("Revenue grew by 1,234 dollars.", "EN", []),
    ("Alice te envió 3 correos sobre el lanzamiento.", "ES", [3]),
    ("Tienes 2 reuniones mañana.", "ES", [2]),
    ("La búsqueda devolvió 12 resultados.", "ES", [12]),
    ("Hay quince elementos en la lista.", "ES", [15]),
    ("ACME cerró hoy a 148,5.", "ES", []),
    ("La reunión es a las 3 de la tarde.", "ES", []),
    ("Alice ने आपको ३ ईमेल भेजे।", "HI", [3]),
    ("कल आपकी २ बैठकें हैं।", "HI", [2]),
    ("खोज में १२ परिणाम मिले।", "HI", [12]),
    ("बैठक ३ बजे है।", "HI", []),
    ("Alice给您发送了三封邮件。", "ZH", [3]),
    ("您明天有2场会议。", "ZH", [2]),
    ("搜索返回了12条结果。", "ZH", [12]),
    ("股价今天是148.5。", "ZH", []),
    ("会议在3点开始。", "ZH", []),
]


@pytest.mark.parametrize("text,lang,expected", COUNT_REF_CASES)
def test_count_references(text, lang, expected):
    assert count_references(text, lang) == expected


def test_numeral_tokens_extraction():
    assert numeral_tokens("found 3 emails and 1,234 dollars", "EN") == [
        ("3", 3), ("1,234", 1234),
    ]
    assert numeral_tokens("no numbers here", "EN") == []
