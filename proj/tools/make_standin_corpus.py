#!/usr/bin/env python3
"""Generate data/standin_reviews.csv, a synthetic stand-in for the Mobile
Legends review export.

The real export is not redistributable here. The stand-in has the same shape:
semicolon-delimited UTF-8, a header row, 10,000 reviews with 6,747 negative,
2,373 positive and 880 neutral labels, and the noise found in app-store text
(slang, emojis, elongated letters, URLs, mentions, numbers, mixed case).

About a third of the polar reviews are contrastive ("awalnya seru ... tapi
sekarang lag parah"): both polarities occur and the label follows the final
clause, so word order carries information a bag-of-words model cannot see.
Three percent of labels are flipped at random.

    python3 tools/make_standin_corpus.py > data/standin_reviews.csv
"""
import random
import sys

SEED = 6747

POS = """bagus seru mantap keren asyik lancar puas hebat menarik sempurna
memuaskan menyenangkan terbaik halus stabil adil cepat ramah suka senang
cinta juara nagih rekomendasi solid epik kompetitif imbang menghibur
bgs mantul asik seruu""".split()

NEG = """jelek lag lemot error kecewa buruk parah curang bosan susah kasar
hancur rusak rugi kesal lambat macet mahal payah menyebalkan mengecewakan
membosankan bug crash berat burik ampas ngelag lelet sampah toxic ngebug
eror kecewaa""".split()

TOPIC = """hero skin event update server jaringan matchmaking rank tim game
moonton diamond mode map grafis karakter turnamen musim kontrol tampilan
fitur sinyal ping loading akun squad hadiah emblem item build draft
permainan pemain gamenya mabar rankednya""".split()

NEUTRAL = """tolong mohon saran semoga tambahkan harap lumayan biasa standar
cukup coba download instal pertanyaan tambah perbaiki kasih sarankan
menunggu berharap usul ide request""".split()

INTENS = ["banget", "bgt", "sekali", "bener", "beneran", "bngt"]
OPENERS = ["awalnya", "dulu", "kemarin", "pertama", "sebelumnya", "minggu lalu"]
PIVOTS = ["tapi sekarang", "tapi", "namun sekarang", "eh sekarang", "tp skrg", "sekarang malah"]
EMOJI_POS = ["😀", "😍", "👍", "🔥", "❤️", "🥰"]
EMOJI_NEG = ["😡", "😤", "👎", "💩", "😭", "🤬"]
EMOJI_NEU = ["🙏", "🤔", "😊", "🙂"]


def elongate(rng, word):
    if len(word) < 3 or rng.random() > 0.15:
        return word
    return word + word[-1] * rng.randint(2, 4)


def decorate(rng, word):
    word = elongate(rng, word)
    r = rng.random()
    if r < 0.08:
        return word.upper()
    if r < 0.16:
        return word.capitalize()
    return word


def clause(rng, polar_words, n_polar):
    words = [rng.choice(TOPIC)]
    for _ in range(n_polar):
        words.append(rng.choice(polar_words))
        if rng.random() < 0.25:
            words.append(rng.choice(INTENS))
    if rng.random() < 0.3:
        words.append(rng.choice(TOPIC))
    rng.shuffle(words)
    return words


def noise(rng, words, emojis):
    out = [decorate(rng, w) for w in words]
    if rng.random() < 0.35:
        out.append(rng.choice(emojis) * rng.randint(1, 3))
    if rng.random() < 0.25:
        out[-1] += rng.choice(["!!!", "!!", ".", "..", "?", "!?"])
    if rng.random() < 0.08:
        out.insert(rng.randrange(len(out) + 1), str(rng.randint(1, 2025)))
    if rng.random() < 0.03:
        out.append("https://play.google.com/store/apps/details?id=com.mobile.legends")
    if rng.random() < 0.04:
        out.insert(0, "@" + rng.choice(["moonton", "mlbb", "admin", "dev"]))
    if rng.random() < 0.04:
        out.append("#" + rng.choice(["mlbb", "mobilelegends", "moonton"]))
    return " ".join(out)


def polar_review(rng, positive):
    mine = POS if positive else NEG
    other = NEG if positive else POS
    emojis = EMOJI_POS if positive else EMOJI_NEG
    if rng.random() < 0.35:
        n = rng.randint(1, 2)
        words = [rng.choice(OPENERS)] + clause(rng, other, n)
        words += rng.choice(PIVOTS).split() + clause(rng, mine, n)
        return noise(rng, words, emojis)
    return noise(rng, clause(rng, mine, rng.randint(1, 3)), emojis)


def neutral_review(rng):
    words = [rng.choice(NEUTRAL) for _ in range(rng.randint(1, 3))]
    words += [rng.choice(TOPIC) for _ in range(rng.randint(1, 3))]
    if rng.random() < 0.2:
        words.append(rng.choice(POS))
        words.append(rng.choice(NEG))
    rng.shuffle(words)
    return noise(rng, words, EMOJI_NEU)


def main():
    rng = random.Random(SEED)
    labels = ["negative"] * 6747 + ["positive"] * 2373 + ["neutral"] * 880
    rows = []
    for label in labels:
        if label == "neutral":
            text = neutral_review(rng)
        else:
            text = polar_review(rng, label == "positive")
        if rng.random() < 0.03:
            text = {"negative": polar_review(rng, True), "positive": polar_review(rng, False),
                    "neutral": polar_review(rng, rng.random() < 0.5)}[label]
        rows.append((text, label))
    rng.shuffle(rows)

    out = sys.stdout
    out.write("review;sentiment\n")
    for text, label in rows:
        if ";" in text or '"' in text or rng.random() < 0.05:
            text = '"' + text.replace('"', '""') + '"'
        spelled = label if rng.random() < 0.8 else label.capitalize()
        out.write(f"{text};{spelled}\n")


if __name__ == "__main__":
    main()
