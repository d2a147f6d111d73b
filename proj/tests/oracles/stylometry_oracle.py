"""Reference values for the stylometry fixture in tests/oracles/stylometry_fixture.hpp.

Independent re-implementation of the tokenizer, syllable rules and the three
index formulas with Python's re/unicodedata and exact fractions. Prints C++
initializers; rerun and paste when the fixture texts change.
"""
import math
import re
import sys
import unicodedata
from collections import Counter
from fractions import Fraction

TEXTS = [
    ("en", "A happy yellow dog ran over the lazy brown kitten."),
    ("en", "One two three four five six seven eight."),
    ("en", "the cat the cat the cat the cat"),
    ("en", "Alpha beta. Gamma delta! Alpha beta? Gamma delta."),
    ("en", "It was late... The bus stopped. Nobody moved!"),
    ("en", "\"Stop,\" he said. \"Now.\" She didn't."),
    ("en", "The table, the bottle and the little apple were free."),
    ("en", "Make the cake; bake the cake; take the cake."),
    ("en", "In 1897 a well-known mayor of Rouen drowned in 3 feet of water."),
    ("en", "Yes yes yes no no maybe."),
    ("en", "Agree to see the tree by the sea."),
    ("en", "Sentence one is here. Sentence two is longer than the first one was."),
    ("fr", "Bonjour. Ça va ?"),
    ("fr", "Le chat dort sur le canapé de la maison."),
    ("fr", "Un homme tomba dans la rivière ; on le repêcha vivant."),
    ("fr", "L'autobus était plein. Le jeune homme au long cou s'assit…"),
    ("fr", "Oui, oui, oui ! Non, non. Peut-être ?"),
    ("fr", "À Nancy, M. Dupont, 57 ans, s'est pendu dans sa grange."),
    ("fr", "Éléonore aime les œufs et le thé glacé."),
    ("fr", "Rien rien rien rien."),
]

TERMINAL = ".!?…"
CLOSING = "\"'”’»)]"
JOINERS = "'’-‐"


def is_word_char(c):
    cat = unicodedata.category(c)
    return cat.startswith("L") or cat == "Nd"


def sentences_of(text):
    text = unicodedata.normalize("NFC", text)
    pattern = re.compile("[" + re.escape(TERMINAL) + "]+[" + re.escape(CLOSING) + "]*(?=\\s|$)")
    pieces, start = [], 0
    for m in pattern.finditer(text):
        pieces.append(text[start:m.end()])
        start = m.end()
    pieces.append(text[start:])
    out = []
    for piece in pieces:
        words = words_of(piece)
        if words:
            out.append(words)
    return out


def words_of(segment):
    words, i, n = [], 0, len(segment)
    while i < n:
        if not is_word_char(segment[i]):
            i += 1
            continue
        j = i
        while j < n:
            if is_word_char(segment[j]):
                j += 1
            elif segment[j] in JOINERS and j + 1 < n and is_word_char(segment[j + 1]):
                j += 2
            else:
                break
        words.append(segment[i:j])
        i = j
    return words


EN_VOWELS = set("aeiouy")
FR_VOWELS = set("aeiouyàâäéèêëîïôöùûüÿœæ")


def syllables(word, lang):
    w = word.lower()
    vowels = EN_VOWELS if lang == "en" else FR_VOWELS
    groups = len(re.findall("[" + "".join(sorted(vowels)) + "]+", w))
    if lang == "en" and groups > 1 and len(w) >= 2 and w[-1] == "e" and w[-2] not in vowels:
        consonant_le = len(w) >= 3 and w[-2] == "l" and w[-3].isalpha() and w[-3] not in vowels
        if not consonant_le:
            groups -= 1
    return max(groups, 1)


def fold(token):
    return token.lower().replace("’", "'")


def indexes(lang, text):
    sents = sentences_of(text)
    tokens = [t for s in sents for t in s]
    counts = Counter(fold(t) for t in tokens)
    n = len(tokens)
    spectrum = Counter(counts.values())
    s2 = sum(i * i * v for i, v in spectrum.items())
    k = Fraction(10000 * (s2 - n), n * n)
    h = -sum((c / n) * math.log2(c / n) for c in counts.values())
    syl = sum(syllables(t, lang) for t in tokens)
    fk = Fraction(39, 100) * Fraction(n, len(sents)) + Fraction(118, 10) * Fraction(syl, n) - Fraction(1559, 100)
    return n, len(sents), syl, float(k), h, float(fk)


def main():
    out = sys.stdout
    for lang, text in TEXTS:
        n, s, syl, k, h, fk = indexes(lang, text)
        escaped = text.replace("\\", "\\\\").replace('"', '\\"')
        out.write('    {"%s", "%s", %d, %d, %d, %.17g, %.17g, %.17g},\n' % (lang, escaped, n, s, syl, k, h, fk))


if __name__ == "__main__":
    main()
