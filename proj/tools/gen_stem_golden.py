#!/usr/bin/env python3
"""Regenerate data/stem_golden.tsv from the Sastrawi reference stemmer.

The golden list is committed; this script records how it was produced.

    pip install Sastrawi==1.0.1
    python3 tools/gen_stem_golden.py > data/stem_golden.tsv

Word selection: a fixed list of review vocabulary plus affixed forms built
from a seeded sample of root words (random.Random(20260416)).
"""
import random
import sys
from pathlib import Path

from Sastrawi.Stemmer.StemmerFactory import StemmerFactory

FIXED = """
main bermain permainan dimainkan memainkan mainkan makanan makan dimakan
bagus sebagus terbagus kebagusan menyenangkan senang kesenangan
mengecewakan kekecewaan kecewa dikecewakan pertandingan bertanding
keseruan terbaik perbaikan diperbaiki memperbaiki kemenangan menang
dikalahkan kekalahan berjalan perjalanan menjalankan pemain pemainnya
gamenya tampilan ditampilkan pengalaman berpengalaman membosankan
kebosanan mengganggu gangguan jaringannya sinyalnya bermasalah
permasalahan diupdate pembaruan memperbarui kesulitan menyulitkan
dibanned pertahanan bertahan ketinggalan tertinggal keberuntungan
""".split()

PREFIXES = ["ber", "di", "ke", "se", "ter", "per", "meN", "peN", "memper", "diper"]
SUFFIXES = ["", "", "kan", "an", "i", "nya", "lah", "kah", "annya", "kannya"]


def nasal(prefix, root):
    head = root[0]
    base = prefix[:-1]  # "me" or "pe"
    if head in "lrwymn":
        return base + root
    if head in "bfv":
        return base + "m" + root
    if head == "p":
        return base + "m" + root[1:]
    if head in "cdjz":
        return base + "n" + root
    if head == "t":
        return base + "n" + root[1:]
    if head == "s":
        return base + "ny" + root[1:]
    if head == "k":
        return base + "ng" + root[1:]
    return base + "ng" + root


def build(root, rng):
    prefix = rng.choice(PREFIXES)
    suffix = rng.choice(SUFFIXES)
    if prefix in ("meN", "peN"):
        word = nasal(prefix, root)
    else:
        word = prefix + root
    return word + suffix


def main():
    data = Path(__file__).resolve().parent.parent / "data"
    roots = [w for w in (data / "root_words.txt").read_text().split() if 4 <= len(w) <= 7]
    rng = random.Random(20260416)
    words = list(dict.fromkeys(FIXED))
    while len(words) < 200:
        root = rng.choice(roots)
        w = root if rng.random() < 0.15 else build(root, rng)
        if w not in words:
            words.append(w)

    stemmer = StemmerFactory().create_stemmer()
    out = sys.stdout
    out.write("# word<TAB>root as produced by Sastrawi 1.0.1 (PyPI), generated by tools/gen_stem_golden.py\n")
    for w in words:
        out.write(f"{w}\t{stemmer.stem(w)}\n")


if __name__ == "__main__":
    main()
