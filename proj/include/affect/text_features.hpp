#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace affect {

// Polarity word lists; a word may not be both positive and negative within
// one lexicon.
struct Lexicon {
    std::string name;
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;

    void validate() const;
};

// One lowercase word per line, UTF-8.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& file);
Lexicon load_lexicon(const std::string& name, const std::filesystem::path& positive_file,
                     const std::filesystem::path& negative_file);

struct Transcript {
    std::string utterance_id;
    double start_time = 0.0;
    std::string raw;
    std::vector<std::string> tokens;

    bool has_words() const { return !tokens.empty(); }
};

// Lowercases, splits on whitespace, strips leading/trailing punctuation,
// drops tokens that end up empty. Internal punctuation ("it's") survives.
std::vector<std::string> tokenize(const std::string& text);

Transcript make_transcript(std::string utterance_id, double start_time, std::string raw);

struct LexiconCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
};

// Occurrence counts with multiplicity.
LexiconCounts lexicon_counts(const std::vector<std::string>& tokens, const Lexicon& lex);

// Layout of the 10-dim text feature vector:
//   [0..3] utterance-level  pos/neg relative frequency for lexicon 1, then 2
//   [4..7] video-level      pos/neg relative frequency for lexicon 1, then 2
//   [8]    utterance word count
//   [9]    video word count
using TextFeature = std::array<double, 10>;
inline constexpr std::size_t kTextFeatureDim = 10;

// Video-level entries are computed over the concatenated tokens of
// `video_utts` (the video's original transcripts, fallback copies excluded).
TextFeature text_features(const Transcript& utt, const std::vector<Transcript>& video_utts,
                          const Lexicon& lex1, const Lexicon& lex2);

// If `utt` has no usable words, returns it with the transcript of the
// temporally nearest utterance that has words (ties resolved toward the
// earlier one). Identity otherwise, and when the whole video is empty.
Transcript resolve_missing_transcript(const Transcript& utt,
                                      const std::vector<Transcript>& video_utts);

}  // namespace affect
