#!/usr/bin/env python3
"""Regenerates the bundled retrieval corpora under data/corpus/.

interview.tsv  - 500 prompt/response pairs in a talk-show interview register.
subtitles.tsv  - 300 pairs in a movie-dialogue register.

Output is deterministic; rerun after editing the banks below.
"""
import pathlib

SUBJECTS = [
    "superheroes", "Disney movies", "movies", "comics", "popcorn", "movie theaters",
    "cartoons", "music", "books", "sports", "basketball", "soccer", "cooking", "pizza",
    "coffee", "travel", "the beach", "hiking", "dogs", "cats", "kids", "family",
    "friends", "work", "school", "the weather", "rain", "summer", "winter", "video games",
    "television", "science fiction", "horror movies", "comedies", "action movies",
    "actors", "the weekend", "holidays", "birthdays", "painting", "photography",
    "gardening", "running", "Spider-Man", "Iron Man", "Batman", "Superman", "Thor",
    "the Hulk", "Wonder Woman",
]

INTERVIEW_PROMPTS = [
    "I like {s}.", "Do you like {s}?", "I hate {s}.", "Tell me about {s}.",
    "What do you think about {s}?", "I have been into {s} lately.", "My friends love {s}.",
    "I do not care about {s}.", "{S} is boring.", "{S} makes me happy.",
]

INTERVIEW_RESPONSES = [
    "What do you like most about {s}?",
    "{S} always reminds me of when I was a kid.",
    "I have been reading a lot about {s} lately.",
    "Honestly, I could talk about {s} all day.",
    "What I meant to say was, what is it that you hate about {s}?",
    "My neighbor told me a funny story about {s} yesterday.",
    "Why do you think people care so much about {s}?",
    "I did not expect you to be interested in {s}.",
    "Is {s} something you share with your family?",
    "That is a fair point about {s}, and a lot of people would agree.",
]

SUBTITLE_PROMPTS = [
    "I miss {s}.", "Have you ever tried {s}?", "We need to talk about {s}.",
    "Nobody understands {s}.", "I grew up with {s}.", "Let us forget about {s}.",
]

SUBTITLE_RESPONSES = [
    "Some things about {s} you never forget, no matter how hard you try.",
    "Then let us go, before it is too late for {s}.",
    "You sound just like my father when he talked about {s}.",
    "Maybe {s} was never the point.",
    "Tell me the truth, what does {s} really mean to you?",
    "I used to think {s} would save us all.",
    "Everybody has a story about {s}, so what is yours?",
    "Keep your voice down, they will hear us talking about {s}.",
]


def cap(s):
    return s[0].upper() + s[1:]


def build(prompts, responses):
    rows = []
    for i, subject in enumerate(SUBJECTS):
        for j, prompt in enumerate(prompts):
            response = responses[(i + j) % len(responses)]
            rows.append((prompt.format(s=subject, S=cap(subject)),
                         response.format(s=subject, S=cap(subject))))
    return rows


def write(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for prompt, response in rows:
            assert "\t" not in prompt and "\t" not in response
            f.write(f"{prompt}\t{response}\n")


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"
    out.mkdir(parents=True, exist_ok=True)
    interview = build(INTERVIEW_PROMPTS, INTERVIEW_RESPONSES)
    subtitles = build(SUBTITLE_PROMPTS, SUBTITLE_RESPONSES)
    assert len(interview) == 500 and len(subtitles) == 300
    write(out / "interview.tsv", interview)
    write(out / "subtitles.tsv", subtitles)


if __name__ == "__main__":
    main()
