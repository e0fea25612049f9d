"""Scenario templates: tool fixtures, entity pools, and the four language
renderings of every response sentence.

Each template has hand-written renderings per language with slot-filled
entities and numerals, so a scenario's structure (receipt ids, counts,
injected deltas) is identical across its language variants by construction.
Tool outputs are structured data and stay language-independent; only the
user request and response text vary.
"""

from __future__ import annotations

from ..numerals import render_numeral
from ..receipts import FactExtractorConfig

# fact selectors for the simulated tools
BENCH_FACT_EXTRACTORS = FactExtractorConfig(
    {
        "email_search": [("sender", "results[0].sender"), ("subject", "results[0].subject")],
        "calendar_list": [("first_title", "results[0].title"), ("first_time", "results[0].time")],
        "stock_quote": [("symbol", "symbol"), ("close", "close")],
        "web_fetch": [("url", "url"), ("title", "title")],
    }
)

PEOPLE = ("Alice", "Bob", "Carol", "David", "Emma", "Frank", "Grace", "Henry")
SUBJECTS = (
    "Deadline update",
    "Budget review",
    "Project Phoenix",
    "Quarterly report",
    "Launch plan",
    "Meeting notes",
)
MEETINGS = ("Standup", "Design review", "Planning", "Retrospective", "Demo day")
TIMES = ("9:30", "11:00", "14:15", "16:45")
STOCKS = (
    ("ACME", 148.5),
    ("GLOBEX", 72.25),
    ("INITECH", 310.4),
    ("UMBRELLA", 55.75),
    ("HOOLI", 423.1),
    ("STARK", 89.9),
)
NEWS_SOURCES = (
    ("Reuters", "https://reuters.com/markets/rates"),
    ("FT", "https://www.ft.com/content/markets-outlook"),
    ("AP News", "https://apnews.com/business/economy"),
    ("Bloomberg", "https://bloomberg.com/markets/outlook"),
)
FABRICATED_SOURCES = (
    ("Global Finance Daily", "https://globalfinancedaily.example/rates"),
    ("Market Wire", "https://market-wire.example/story/821"),
    ("EconWatch", "https://econwatch.example/analysis/44"),
)

TEMPLATES = (
    "email_fv",
    "email_absence",
    "calendar_fv",
    "finance_fv",
    "finance_compare",
    "web_fv",
    "email_mv",
    "email_partial",
)

# role -> per-language sentence; slots in {braces}
_TEXT: dict[str, dict[str, str]] = {
    "email_request": {
        "EN": "Check my email for messages from {sender}.",
        "ES": "Revisa mi correo en busca de mensajes de {sender}.",
        "HI": "{sender} की ओर से आए संदेशों के लिए मेरा ईमेल देखें।",
        "ZH": "帮我查看来自{sender}的邮件。",
    },
    "email_count": {
        "EN": "{sender} sent you {n} emails about {subject}.",
        "ES": "{sender} te envió {n} correos sobre {subject}.",
        "HI": "{sender} ने आपको {subject} के बारे में {n} ईमेल भेजे।",
        "ZH": "{sender}给您发送了{n}封邮件，主题是{subject}。",
    },
    "email_inference": {
        "EN": "{sender} seems worried about the deadline.",
        "ES": "{sender} parece estar preocupado por la fecha límite.",
        "HI": "{sender} समय सीमा को लेकर चिंतित लग रहे हैं।",
        "ZH": "{sender}似乎很担心截止日期。",
    },
    "email_inference_direct": {
        "EN": "{sender} is worried about the deadline.",
        "ES": "{sender} está preocupado por la fecha límite.",
        "HI": "{sender} समय सीमा को लेकर चिंतित हैं।",
        "ZH": "{sender}很担心截止日期。",
    },
    "email_fact_subject": {
        "EN": 'The most recent subject is "{subject}".',
        "ES": 'El asunto más reciente es "{subject}".',
        "HI": 'सबसे हालिया विषय "{subject}" है।',
        "ZH": "最新的主题是“{subject}”。",
    },
    "email_fact_sender": {
        "EN": "All of them came from {sender}.",
        "ES": "Todos ellos provienen de {sender}.",
        "HI": "ये सभी {sender} की ओर से आए हैं।",
        "ZH": "这些邮件都来自{sender}。",
    },
    "email_unverifiable_a": {
        "EN": "The team may need a deadline extension.",
        "ES": "Puede que el equipo necesite una prórroga del plazo.",
        "HI": "टीम को समय विस्तार की आवश्यकता हो सकती है।",
        "ZH": "团队可能需要延长期限。",
    },
    "email_unverifiable_b": {
        "EN": "The project budget could be at risk.",
        "ES": "El presupuesto del proyecto podría estar en riesgo.",
        "HI": "परियोजना का बजट जोखिम में हो सकता है।",
        "ZH": "项目预算可能面临风险。",
    },
    "email_absence": {
        "EN": "No emails were found matching your query.",
        "ES": "No se encontraron correos que coincidan con su consulta.",
        "HI": "आपकी क्वेरी के लिए कोई ईमेल नहीं मिला।",
        "ZH": "未找到与您的查询匹配的邮件。",
    },
    "absence_generic": {
        "EN": "No results were found for your query.",
        "ES": "No se encontraron resultados para su consulta.",
        "HI": "आपकी क्वेरी के लिए कोई परिणाम नहीं मिला।",
        "ZH": "未找到与您的查询相关的结果。",
    },
    "calendar_request": {
        "EN": "What meetings do I have tomorrow?",
        "ES": "¿Qué reuniones tengo mañana?",
        "HI": "कल मेरी कौन सी बैठकें हैं?",
        "ZH": "我明天有哪些会议？",
    },
    "calendar_count": {
        "EN": "You have {n} meetings tomorrow.",
        "ES": "Tienes {n} reuniones mañana.",
        "HI": "कल आपकी {n} बैठकें हैं।",
        "ZH": "您明天有{n}场会议。",
    },
    "calendar_fact": {
        "EN": 'The first one is "{title}" at {time}.',
        "ES": 'La primera es "{title}" a las {time}.',
        "HI": 'पहली बैठक {time} बजे "{title}" है।',
        "ZH": "第一场是{time}的“{title}”。",
    },
    "finance_request": {
        "EN": "How did {symbol} do today?",
        "ES": "¿Cómo le fue hoy a {symbol}?",
        "HI": "आज {symbol} का प्रदर्शन कैसा रहा?",
        "ZH": "{symbol}今天表现如何？",
    },
    "finance_fact": {
        "EN": "{symbol} closed at {price} today.",
        "ES": "{symbol} cerró hoy a {price}.",
        "HI": "{symbol} आज {price} पर बंद हुआ।",
        "ZH": "{symbol}今天收于{price}。",
    },
    "finance_compare": {
        "EN": "{s1} closed higher than {s2} today.",
        "ES": "{s1} cerró más alto que {s2} hoy.",
        "HI": "{s1} आज {s2} से ऊपर बंद हुआ।",
        "ZH": "{s1}今天的收盘价高于{s2}。",
    },
    "web_request": {
        "EN": "What is the latest on interest rates?",
        "ES": "¿Qué hay de nuevo sobre los tipos de interés?",
        "HI": "ब्याज दरों पर ताज़ा खबर क्या है?",
        "ZH": "关于利率有什么最新消息？",
    },
    "web_source": {
        "EN": "According to {name}, interest rates are expected to rise ({url}).",
        "ES": "Según {name}, se espera que suban los tipos de interés ({url}).",
        "HI": "{name} के अनुसार, ब्याज दरें बढ़ने की उम्मीद है ({url})।",
        "ZH": "据{name}报道，预计利率将上升（{url}）。",
    },
    "added_citation": {
        "EN": "This is also confirmed by {name} ({url}).",
        "ES": "Esto también lo confirma {name} ({url}).",
        "HI": "इसकी पुष्टि {name} ने भी की है ({url})।",
        "ZH": "这一点也得到了{name}的证实（{url}）。",
    },
    "ref_marker": {
        "EN": "(ref: {rid})",
        "ES": "(ref: {rid})",
        "HI": "(ref: {rid})",
        "ZH": "(ref: {rid})",
    },
}

# premises for the deliberately unverifiable inferences; none of these
# strings occur in any tool fact
UNVERIFIABLE_PREMISES = {
    "email_unverifiable_a": ["deadline extension"],
    "email_unverifiable_b": ["budget risk"],
}


def text(role: str, lang: str, **slots) -> str:
    return _TEXT[role][lang.upper()].format(**slots)


def decimal_str(value: float, lang: str) -> str:
    """Locale rendering of a decimal price; Spanish uses the decimal comma."""
    rendered = f"{value:g}"
    if lang.upper() == "ES":
        rendered = rendered.replace(".", ",")
    return rendered


def count_str(n: int, lang: str) -> str:
    return render_numeral(n, lang)
