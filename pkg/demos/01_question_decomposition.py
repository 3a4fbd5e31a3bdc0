"""Walk through question decomposition on a handful of questions.

A question splits into structural tokens (kept) and entity tokens
(replaced by typed slots). The slot assignment is reversible: filling
the template with the original entities regenerates the question.
"""
from skillpath.decompose import decompose_question, render_template

QUESTIONS = [
    "Which is taller, the Eiffel Tower or the Empire State Building?",
    "Who founded the Acme Corporation?",
    "Was the telephone invented in 1889?",
    "In what city was the subject of the film Nowhere Boy born?",
]


def show(question):
    template = decompose_question(question)
    print(f"question:  {question}")
    print(f"template:  {template.template_text}")
    for p in template.placeholders:
        article = f" (article {p.article!r})" if p.article else ""
        print(f"  slot [{p.slot}] <- {p.entity_text}  type={p.entity_type}{article}")
    rebuilt = render_template(template, template.original_substitutions())
    print(f"round trip ok: {rebuilt == question}")
    print()


for q in QUESTIONS:
    show(q)

# swapping in new entities of the same types gives a sibling question
template = decompose_question(QUESTIONS[0])
sibling = render_template(
    template,
    {"adj": "older", "place 1": "the Brooklyn Bridge", "place 2": "the Golden Gate Bridge"},
)
print("sibling question:", sibling)
