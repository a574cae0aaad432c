#include "affect/text_features.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "affect/errors.hpp"

namespace affect {

namespace {

bool is_punct_byte(unsigned char c) {
    return c < 0x80 && std::ispunct(c) != 0;
}

}  // namespace

void Lexicon::validate() const {
    if (positive.empty() || negative.empty())
        throw ConfigError("lexicon " + name + " has an empty polarity list");
    for (const auto& w : positive)
        if (negative.count(w))
            throw ConfigError("lexicon " + name + " lists \"" + w + "\" as both polarities");
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open word list: " + file.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        for (char& c : line) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!line.empty()) words.insert(line);
    }
    return words;
}

Lexicon load_lexicon(const std::string& name, const std::filesystem::path& positive_file,
                     const std::filesystem::path& negative_file) {
    Lexicon lex;
    lex.name = name;
    lex.positive = load_word_list(positive_file);
    lex.negative = load_word_list(negative_file);
    lex.validate();
    return lex;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) continue;
        std::size_t lo = start, hi = i;  // [lo, hi)
        while (lo < hi && is_punct_byte(static_cast<unsigned char>(text[lo]))) ++lo;
        while (hi > lo && is_punct_byte(static_cast<unsigned char>(text[hi - 1]))) --hi;
        if (lo == hi) continue;
        std::string token;
        token.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k)
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
        tokens.push_back(std::move(token));
    }
    return tokens;
}

Transcript make_transcript(std::string utterance_id, double start_time, std::string raw) {
    Transcript t;
    t.utterance_id = std::move(utterance_id);
    t.start_time = start_time;
    t.tokens = tokenize(raw);
    t.raw = std::move(raw);
    return t;
}

LexiconCounts lexicon_counts(const std::vector<std::string>& tokens, const Lexicon& lex) {
    LexiconCounts counts;
    for (const auto& tok : tokens) {
        if (lex.positive.count(tok)) ++counts.positive;
        else if (lex.negative.count(tok)) ++counts.negative;
    }
    return counts;
}

namespace {

double safe_freq(std::size_t count, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

TextFeature text_features(const Transcript& utt, const std::vector<Transcript>& video_utts,
                          const Lexicon& lex1, const Lexicon& lex2) {
    LexiconCounts u1 = lexicon_counts(utt.tokens, lex1);
    LexiconCounts u2 = lexicon_counts(utt.tokens, lex2);
    std::size_t utt_words = utt.tokens.size();

    LexiconCounts v1, v2;
    std::size_t video_words = 0;
    for (const Transcript& t : video_utts) {
        LexiconCounts c1 = lexicon_counts(t.tokens, lex1);
        LexiconCounts c2 = lexicon_counts(t.tokens, lex2);
        v1.positive += c1.positive;
        v1.negative += c1.negative;
        v2.positive += c2.positive;
        v2.negative += c2.negative;
        video_words += t.tokens.size();
    }

    TextFeature f;
    f[0] = safe_freq(u1.positive, utt_words);
    f[1] = safe_freq(u1.negative, utt_words);
    f[2] = safe_freq(u2.positive, utt_words);
    f[3] = safe_freq(u2.negative, utt_words);
    f[4] = safe_freq(v1.positive, video_words);
    f[5] = safe_freq(v1.negative, video_words);
    f[6] = safe_freq(v2.positive, video_words);
    f[7] = safe_freq(v2.negative, video_words);
    f[8] = static_cast<double>(utt_words);
    f[9] = static_cast<double>(video_words);
    return f;
}

Transcript resolve_missing_transcript(const Transcript& utt,
                                      const std::vector<Transcript>& video_utts) {
    if (utt.has_words()) return utt;

    const Transcript* donor = nullptr;
    double best_dist = 0.0;
    for (const Transcript& cand : video_utts) {
        if (!cand.has_words()) continue;
        double dist = std::abs(cand.start_time - utt.start_time);
        // ties go to the earlier utterance; video_utts is ordered by time, so
        // the first candidate at a given distance wins
        if (!donor || dist < best_dist) {
            donor = &cand;
            best_dist = dist;
        }
    }
    if (!donor) return utt;

    Transcript resolved = utt;
    resolved.raw = donor->raw;
    resolved.tokens = donor->tokens;
    return resolved;
}

}  // namespace affect
