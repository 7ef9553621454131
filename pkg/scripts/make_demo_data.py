#!/usr/bin/env python3
"""Build a small self-contained demo catalog under ./demo_data.

Writes a concept lexicon, three SRT transcripts with metadata sidecars,
ingests them, and prints the serve command to explore the result.
"""

import json
import sys
from pathlib import Path

from flowbar.cli import main as flowbar_main

LEXICON = [
    {"surface": "machine learning", "concepts": [{"id": "Machine_learning", "title": "Machine learning", "url": "https://en.wikipedia.org/wiki/Machine_learning", "prior": 0.9}]},
    {"surface": "neural network", "concepts": [{"id": "Neural_network", "title": "Neural network", "url": "https://en.wikipedia.org/wiki/Neural_network", "prior": 0.8}]},
    {"surface": "deep learning", "concepts": [{"id": "Deep_learning", "title": "Deep learning", "url": "https://en.wikipedia.org/wiki/Deep_learning", "prior": 0.9}]},
    {"surface": "gradient descent", "concepts": [{"id": "Gradient_descent", "title": "Gradient descent", "url": "https://en.wikipedia.org/wiki/Gradient_descent", "prior": 0.9}]},
    {"surface": "climate change", "concepts": [{"id": "Climate_change", "title": "Climate change", "url": "https://en.wikipedia.org/wiki/Climate_change", "prior": 1.0}]},
    {"surface": "greenhouse gas", "concepts": [{"id": "Greenhouse_gas", "title": "Greenhouse gas", "url": "https://en.wikipedia.org/wiki/Greenhouse_gas", "prior": 0.9}]},
    {"surface": "carbon dioxide", "concepts": [{"id": "Carbon_dioxide", "title": "Carbon dioxide", "url": "https://en.wikipedia.org/wiki/Carbon_dioxide", "prior": 0.9}]},
    {"surface": "sea level", "concepts": [{"id": "Sea_level_rise", "title": "Sea level rise", "url": "https://en.wikipedia.org/wiki/Sea_level_rise", "prior": 0.7}]},
    {"surface": "data science", "concepts": [{"id": "Data_science", "title": "Data science", "url": "https://en.wikipedia.org/wiki/Data_science", "prior": 0.9}]},
    {"links": {
        "Machine_learning": ["Neural_network", "Deep_learning", "Gradient_descent", "Data_science"],
        "Neural_network": ["Machine_learning", "Deep_learning"],
        "Deep_learning": ["Machine_learning", "Neural_network"],
        "Gradient_descent": ["Machine_learning"],
        "Data_science": ["Machine_learning"],
        "Climate_change": ["Greenhouse_gas", "Carbon_dioxide", "Sea_level_rise"],
        "Greenhouse_gas": ["Climate_change", "Carbon_dioxide"],
        "Carbon_dioxide": ["Climate_change", "Greenhouse_gas"],
        "Sea_level_rise": ["Climate_change"],
    }},
    {"definitions": {
        "Machine_learning": "Machine learning is the study of algorithms that improve automatically through experience.",
        "Neural_network": "A neural network is a computing system inspired by biological neurons.",
        "Deep_learning": "Deep learning uses many-layered neural networks to learn representations.",
        "Climate_change": "Climate change is the long-term shift in global temperatures and weather patterns.",
        "Greenhouse_gas": "A greenhouse gas absorbs and emits radiant energy, warming the planet.",
        "Carbon_dioxide": "Carbon dioxide is a heat-trapping gas released by burning fossil fuels.",
    }},
]

# Topic phrases rotate between fragments so no concept is ubiquitous enough
# (>= 80% of fragments) to be hoisted off the fragment level into video tags.
SENTENCES = {
    "ml_intro": [
        "Today we introduce machine learning and why it matters.",
        "This field now shapes products that people use every day.",
        "We will keep the mathematics light and the examples concrete.",
        "A neural network can approximate very complex functions.",
        "We train these models with gradient descent on large datasets.",
    ],
    "climate_basics": [
        "Climate change is reshaping ecosystems around the world.",
        "Greenhouse gas concentrations keep rising every single year.",
        "The evidence has been accumulating for several decades now.",
        "Carbon dioxide stays in the atmosphere for centuries.",
        "Sea level follows the warming with a considerable delay.",
    ],
    "ml_applications": [
        "Machine learning drives recommendations and search ranking.",
        "Neural network models power modern speech recognition too.",
        "The same toolbox is spreading into the physical sciences.",
        "Data science teams apply it to climate change scenarios.",
        "Deep learning even helps forecast extreme weather events.",
    ],
}


def srt_for(sentences, seconds_per_cue=40):
    lines = []
    for i, sentence in enumerate(sentences):
        start, end = i * seconds_per_cue, (i + 1) * seconds_per_cue
        lines.append(
            f"{i + 1}\n"
            f"{start // 3600:02d}:{start % 3600 // 60:02d}:{start % 60:02d},000 --> "
            f"{end // 3600:02d}:{end % 3600 // 60:02d}:{end % 60:02d},000\n"
            f"{sentence}\n"
        )
    return "\n".join(lines)


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_data")
    src = root / "transcripts"
    src.mkdir(parents=True, exist_ok=True)

    lexicon_path = root / "lexicon.ndjson"
    lexicon_path.write_text("\n".join(json.dumps(r) for r in LEXICON), encoding="utf-8")

    for video_id, sentences in SENTENCES.items():
        (src / f"{video_id}.srt").write_text(srt_for(sentences), encoding="utf-8")
        (src / f"{video_id}.json").write_text(
            json.dumps({"video_id": video_id, "title": video_id.replace("_", " ").title(),
                        "media_url": f"https://example.org/media/{video_id}.mp4"}),
            encoding="utf-8",
        )

    code = flowbar_main([
        "ingest", str(src), "--data-dir", str(root), "--lexicon", str(lexicon_path),
        "--target-chars", "120", "--overwrite",
    ])
    if code == 0:
        print(f"\ndemo catalog ready. serve it with:\n  flowbar serve --data-dir {root} --lexicon {lexicon_path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
