"""Drive the whole pipeline through the command line, end to end.

Writes a two-question corpus to a temp directory, then runs the three
subcommands with the offline mock provider: generate builds a bundle of
example collections, answer produces a run log of guided answers, eval
scores the log against the corpus and prints the summary block.
"""
import json
import os
import tempfile

from skillpath.cli import main

work = tempfile.mkdtemp(prefix="skillpath-demo-")
corpus = os.path.join(work, "corpus.jsonl")
bundle = os.path.join(work, "collections.json")
run_log = os.path.join(work, "run.jsonl")
report = os.path.join(work, "report.json")

rows = [
    {
        "question_id": "q1",
        "question": "Which is taller, the Eiffel Tower or the Empire State Building?",
        "documents": [
            "The Eiffel Tower stands 330 metres tall. "
            "The Empire State Building stands 443 metres tall."
        ],
        "gold_answers": ["the Empire State Building"],
        "gold_sentence_ids": [[0, 1]],
    },
    {
        "question_id": "q2",
        "question": "Was the telephone invented in 1889?",
        "documents": ["The telephone was patented in 1876. The tower opened in 1889."],
        "gold_answers": ["no"],
        "gold_sentence_ids": None,
    },
]
with open(corpus, "w", encoding="utf-8") as fh:
    for row in rows:
        fh.write(json.dumps(row) + "\n")

print("== generate ==")
code = main(["generate", "--provider", "mock", "--corpus", corpus,
             "--collection", bundle, "--count", "2", "--delta", "7"])
print("exit", code)

print("\n== answer ==")
code = main(["answer", "--provider", "mock", "--corpus", corpus,
             "--collection", bundle, "--run-log", run_log])
print("exit", code)

print("\n== eval ==")
code = main(["eval", "--corpus", corpus, "--run-log", run_log, "--report", report])
print("exit", code)

print("\nartifacts in", work)
for name in sorted(os.listdir(work)):
    print(" -", name)
