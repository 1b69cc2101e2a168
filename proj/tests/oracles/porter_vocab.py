#!/usr/bin/env python3
"""Freeze Porter stems for a WordNet-derived vocabulary using NLTK's
MARTIN_EXTENSIONS mode (Martin Porter's reference behaviour).

usage: porter_vocab.py WORDNET_DICT_DIR > tests/data/porter_vocab.tsv
"""
import random
import sys

from nltk.stem.porter import PorterStemmer

words = set()
for pos in ("noun", "verb", "adj", "adv"):
    with open(f"{sys.argv[1]}/index.{pos}", encoding="latin-1") as f:
        for line in f:
            if line.startswith(" "):
                continue
            w = line.split(" ", 1)[0]
            if w.isalpha() and w.isascii():
                words.add(w.lower())

fixed = ["caresses", "ponies", "ties", "caress", "cats", "feed", "agreed",
         "plastered", "bled", "motoring", "sing", "conflated", "troubled",
         "sized", "hopping", "tanned", "falling", "hissing", "fizzed",
         "failing", "filing", "happy", "sky", "relational", "conditional",
         "rational", "valenci", "hesitanci", "digitizer", "conformabli",
         "radicalli", "differentli", "vileli", "analogousli", "vietnamization",
         "predication", "operator", "feudalism", "decisiveness", "hopefulness",
         "callousness", "formaliti", "sensitiviti", "sensibiliti", "triplicate",
         "formative", "formalize", "electriciti", "electrical", "hopeful",
         "goodness", "revival", "allowance", "inference", "airliner",
         "gyroscopic", "adjustable", "defensible", "irritant", "replacement",
         "adjustment", "dependent", "adoption", "homologou", "communism",
         "activate", "angulariti", "homologous", "effective", "bowdlerize",
         "probate", "rate", "cease", "controll", "roll", "generalizations",
         "oscillators", "a", "is", "as", "prisons", "coping", "overcrowded",
         "infection", "yeast", "trading", "insider", "automobile", "analogi"]
rng = random.Random(20260101)
sample = sorted(rng.sample(sorted(words), 6000)) + fixed
stem = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS).stem
seen = set()
for w in sample:
    if w in seen:
        continue
    seen.add(w)
    print(f"{w}\t{stem(w)}")
