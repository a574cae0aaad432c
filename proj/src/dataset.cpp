#include "affect/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "affect/errors.hpp"
#include "affect/frames.hpp"
#include "affect/io_util.hpp"

namespace affect {

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "train";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "val") return Split::val;
    if (name == "test") return Split::test;
    throw ConfigError("unknown split: " + name + " (expected train, val or test)");
}

std::vector<const UtteranceRecord*> Manifest::split_records(Split s) const {
    std::vector<const UtteranceRecord*> out;
    for (const auto& r : records)
        if (r.split == s) out.push_back(&r);
    return out;
}

namespace {

const char* kManifestHeader =
    "utterance_id,video_id,start_time,split,arousal,valence,transcript_path,visual_path,audio_path";

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());

    Manifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : ".";

    std::string line;
    if (!std::getline(in, line)) throw IoError("manifest is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kManifestHeader)
        throw IoError("manifest header mismatch in " + path.string() + "; expected \"" +
                      kManifestHeader + "\"");

    std::unordered_set<std::string> seen_ids;
    std::unordered_map<std::string, Split> video_split;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        std::string where = path.string() + ":" + std::to_string(line_no);
        if (fields.size() != 9)
            throw IoError("malformed manifest row at " + where + ": expected 9 fields, got " +
                          std::to_string(fields.size()));

        UtteranceRecord rec;
        rec.utterance_id = fields[0];
        rec.video_id = fields[1];
        rec.start_time = parse_double(fields[2], where);
        rec.split = split_from_name(fields[3]);
        rec.arousal = parse_double(fields[4], where);
        rec.valence = parse_double(fields[5], where);
        rec.transcript_path = fields[6];
        rec.visual_path = fields[7];
        rec.audio_path = fields[8];

        if (rec.utterance_id.empty())
            throw IoError("empty utterance_id at " + where);
        if (rec.arousal < 0.0 || rec.arousal > 1.0)
            throw IoError("arousal " + format_double(rec.arousal) + " outside [0,1] at " + where);
        if (rec.valence < -1.0 || rec.valence > 1.0)
            throw IoError("valence " + format_double(rec.valence) + " outside [-1,1] at " + where);
        if (!seen_ids.insert(rec.utterance_id).second)
            throw IoError("duplicate utterance_id \"" + rec.utterance_id + "\" at " + where);
        auto [it, inserted] = video_split.emplace(rec.video_id, rec.split);
        if (!inserted && it->second != rec.split)
            throw IoError("video \"" + rec.video_id + "\" spans multiple splits at " + where);

        manifest.split_counts[rec.split] += 1;
        manifest.records.push_back(std::move(rec));
    }
    if (manifest.records.empty())
        throw IoError("manifest has no utterances: " + path.string());
    return manifest;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base / p;
}

Transcript read_transcript(const UtteranceRecord& rec, const std::filesystem::path& base) {
    return make_transcript(rec.utterance_id, rec.start_time,
                           read_text_file(resolve(base, rec.transcript_path)));
}

}  // namespace

std::vector<Transcript> video_transcripts(const Manifest& manifest, const std::string& video_id) {
    std::vector<Transcript> out;
    for (const auto& rec : manifest.records)
        if (rec.video_id == video_id) out.push_back(read_transcript(rec, manifest.base_dir));
    std::sort(out.begin(), out.end(), [](const Transcript& a, const Transcript& b) {
        return a.start_time < b.start_time;
    });
    return out;
}

FeatureBundle load_features(const UtteranceRecord& record,
                            const std::vector<Transcript>& video_transcripts,
                            const Lexicon& lex1, const Lexicon& lex2, const FeatureDims& dims,
                            const std::filesystem::path& base_dir) {
    FeatureBundle bundle;

    Tensor visual = read_numeric_csv(resolve(base_dir, record.visual_path));
    if (dims.visual_dim != 0 && visual.cols() != dims.visual_dim)
        throw IoError("visual file " + record.visual_path + " has " +
                      std::to_string(visual.cols()) + " columns, expected " +
                      std::to_string(dims.visual_dim));
    bundle.visual = sample_frames(visual, dims.frames);

    Tensor audio = read_numeric_csv(resolve(base_dir, record.audio_path));
    if (audio.rows() != 1)
        throw IoError("audio file " + record.audio_path + " must hold a single row, found " +
                      std::to_string(audio.rows()));
    if (dims.audio_dim != 0 && audio.cols() != dims.audio_dim)
        throw IoError("audio file " + record.audio_path + " has " + std::to_string(audio.cols()) +
                      " columns, expected " + std::to_string(dims.audio_dim));
    bundle.audio = audio;

    const Transcript* self = nullptr;
    for (const Transcript& t : video_transcripts)
        if (t.utterance_id == record.utterance_id) self = &t;
    Transcript own = self ? *self : read_transcript(record, base_dir);
    Transcript resolved = resolve_missing_transcript(own, video_transcripts);
    TextFeature tf = text_features(resolved, video_transcripts, lex1, lex2);

    bundle.text = Tensor(std::vector<std::size_t>{1, kTextFeatureDim});
    for (std::size_t i = 0; i < kTextFeatureDim; ++i) bundle.text[i] = tf[i];
    return bundle;
}

ExampleSet load_split(const Manifest& manifest, Split split, const Lexicon& lex1,
                      const Lexicon& lex2, FeatureDims dims) {
    auto records = manifest.split_records(split);
    if (records.empty())
        throw ConfigError(std::string("split ") + split_name(split) + " has no utterances");

    std::unordered_map<std::string, std::vector<Transcript>> per_video;
    ExampleSet out;
    out.reserve(records.size());
    for (const UtteranceRecord* rec : records) {
        auto it = per_video.find(rec->video_id);
        if (it == per_video.end())
            it = per_video.emplace(rec->video_id, video_transcripts(manifest, rec->video_id)).first;

        LabeledBundle ex;
        ex.utterance_id = rec->utterance_id;
        ex.video_id = rec->video_id;
        ex.arousal = rec->arousal;
        ex.valence = rec->valence;
        ex.features = load_features(*rec, it->second, lex1, lex2, dims, manifest.base_dir);
        if (dims.visual_dim == 0) dims.visual_dim = ex.features.visual.cols();
        if (dims.audio_dim == 0) dims.audio_dim = ex.features.audio.cols();
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace affect
