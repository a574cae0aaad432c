#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "affect/model.hpp"
#include "affect/text_features.hpp"
#include "affect/training.hpp"

namespace affect {

enum class Split { train, val, test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct UtteranceRecord {
    std::string utterance_id;
    std::string video_id;
    double start_time = 0.0;
    Split split = Split::train;
    double arousal = 0.0;   // [0, 1]
    double valence = 0.0;   // [-1, 1]
    std::string transcript_path;
    std::string visual_path;
    std::string audio_path;
};

struct Manifest {
    std::filesystem::path base_dir;  // directory paths are resolved against
    std::vector<UtteranceRecord> records;
    std::map<Split, std::size_t> split_counts;

    std::vector<const UtteranceRecord*> split_records(Split s) const;
};

// CSV with header
// utterance_id,video_id,start_time,split,arousal,valence,transcript_path,visual_path,audio_path
// Rows with out-of-range labels, duplicate ids, or a video spanning several
// splits are rejected with the offending line number.
Manifest load_manifest(const std::filesystem::path& path);

struct FeatureDims {
    std::size_t visual_dim = 0;  // 0 = adopt the width of the first file seen
    std::size_t audio_dim = 0;
    std::size_t frames = 20;
};

// Feature files for one utterance: visual N x Dv resampled to `frames` rows,
// single-row audio vector, and the 10-dim lexicon text features computed from
// the (fallback-resolved) transcript against the video's transcripts.
FeatureBundle load_features(const UtteranceRecord& record,
                            const std::vector<Transcript>& video_transcripts,
                            const Lexicon& lex1, const Lexicon& lex2, const FeatureDims& dims,
                            const std::filesystem::path& base_dir);

// Loads every utterance of a split, grouping transcripts per video. When
// dims.visual_dim or audio_dim is 0 the width of the first file fixes the
// expectation for the rest.
ExampleSet load_split(const Manifest& manifest, Split split, const Lexicon& lex1,
                      const Lexicon& lex2, FeatureDims dims);

// Transcripts of one video ordered by start time (original text, no fallback).
std::vector<Transcript> video_transcripts(const Manifest& manifest,
                                          const std::string& video_id);

}  // namespace affect
