#include "diafair/manifest.hpp"

#include "diafair/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace diafair {

std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::Male: return "Male";
        case Gender::Female: return "Female";
        case Gender::Other: return "Other";
        case Gender::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(Age a) {
    switch (a) {
        case Age::Teens: return "Teens";
        case Age::Twenties: return "Twenties";
        case Age::Thirties: return "Thirties";
        case Age::Forties: return "Forties";
        case Age::Fifties: return "Fifties";
        case Age::Sixties: return "Sixties";
        case Age::Seventies: return "Seventies";
        case Age::Eighties: return "Eighties";
        case Age::Nineties: return "Nineties";
        case Age::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(Accent a) {
    switch (a) {
        case Accent::US: return "US";
        case Accent::British: return "British";
        case Accent::Indian: return "Indian";
        case Accent::Australian: return "Australian";
        case Accent::Canadian: return "Canadian";
        case Accent::NewZealander: return "NewZealander";
        case Accent::African: return "African";
        case Accent::Scottish: return "Scottish";
        case Accent::Filipino: return "Filipino";
        case Accent::Irish: return "Irish";
        case Accent::Malaysian: return "Malaysian";
        case Accent::HongKong: return "HongKong";
        case Accent::Singapore: return "Singapore";
        case Accent::Welsh: return "Welsh";
        case Accent::OtherAccent: return "OtherAccent";
        case Accent::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(LengthBin b) {
    switch (b) {
        case LengthBin::Below10: return "[0,10)";
        case LengthBin::From10To30: return "[10,30)";
        case LengthBin::From30To50: return "[30,50)";
        case LengthBin::From50To70: return "[50,70)";
        case LengthBin::From70To100: return "[70,100)";
        case LengthBin::From100: return "[100,inf)";
    }
    return "[0,10)";
}

Gender normalize_gender(std::string_view raw) {
    const std::string key = detail::lower(detail::trim(raw));
    if (key == "male") return Gender::Male;
    if (key == "female") return Gender::Female;
    if (key == "other") return Gender::Other;
    return Gender::Unknown;
}

Age normalize_age(std::string_view raw) {
    const std::string key = detail::lower(detail::trim(raw));
    for (Age a : kAgeOrder) {
        if (key == detail::lower(to_string(a))) return a;
    }
    return Age::Unknown;
}

namespace {

// Keys are lower-cased. Covers the free-text labels of the CommonVoice v9
// English release, the short codes used by earlier releases, and the
// canonical names returned by to_string.
const std::unordered_map<std::string, Accent>& accent_aliases() {
    static const std::unordered_map<std::string, Accent> table = [] {
        std::unordered_map<std::string, Accent> t{
            {"united states english", Accent::US},
            {"us", Accent::US},
            {"england english", Accent::British},
            {"england", Accent::British},
            {"british", Accent::British},
            {"india and south asia (india, pakistan, sri lanka)", Accent::Indian},
            {"indian", Accent::Indian},
            {"australian english", Accent::Australian},
            {"australia", Accent::Australian},
            {"australian", Accent::Australian},
            {"canadian english", Accent::Canadian},
            {"canada", Accent::Canadian},
            {"canadian", Accent::Canadian},
            {"new zealand english", Accent::NewZealander},
            {"newzealand", Accent::NewZealander},
            {"newzealander", Accent::NewZealander},
            {"southern african (south africa, zimbabwe, namibia)", Accent::African},
            {"african", Accent::African},
            {"scottish english", Accent::Scottish},
            {"scotland", Accent::Scottish},
            {"scottish", Accent::Scottish},
            {"filipino", Accent::Filipino},
            {"philippines", Accent::Filipino},
            {"irish english", Accent::Irish},
            {"ireland", Accent::Irish},
            {"irish", Accent::Irish},
            {"malaysian english", Accent::Malaysian},
            {"malaysia", Accent::Malaysian},
            {"malaysian", Accent::Malaysian},
            {"hong kong english", Accent::HongKong},
            {"hongkong", Accent::HongKong},
            {"singaporean english", Accent::Singapore},
            {"singapore", Accent::Singapore},
            {"welsh english", Accent::Welsh},
            {"wales", Accent::Welsh},
            {"welsh", Accent::Welsh},
            {"otheraccent", Accent::OtherAccent},
        };
        return t;
    }();
    return table;
}

}  // namespace

Accent normalize_accent(std::string_view raw) {
    const std::string key = detail::lower(detail::trim(raw));
    if (key.empty()) return Accent::Unknown;
    const auto& aliases = accent_aliases();
    if (auto it = aliases.find(key); it != aliases.end()) return it->second;
    return Accent::OtherAccent;
}

LengthBin sentence_length_bin(std::size_t length) {
    if (length < 10) return LengthBin::Below10;
    if (length < 30) return LengthBin::From10To30;
    if (length < 50) return LengthBin::From30To50;
    if (length < 70) return LengthBin::From50To70;
    if (length < 100) return LengthBin::From70To100;
    return LengthBin::From100;
}

std::pair<std::size_t, std::optional<std::size_t>> bin_edges(LengthBin b) {
    switch (b) {
        case LengthBin::Below10: return {0, 10};
        case LengthBin::From10To30: return {10, 30};
        case LengthBin::From30To50: return {30, 50};
        case LengthBin::From50To70: return {50, 70};
        case LengthBin::From70To100: return {70, 100};
        case LengthBin::From100: return {100, std::nullopt};
    }
    return {0, 10};
}

std::optional<std::size_t> utf8_length(std::string_view text) {
    std::size_t count = 0;
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    while (i < text.size()) {
        const unsigned char lead = byte(i);
        std::size_t extra = 0;
        std::uint32_t cp = 0;
        if (lead < 0x80) {
            cp = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            extra = 1;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            extra = 2;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            extra = 3;
            cp = lead & 0x07;
        } else {
            return std::nullopt;
        }
        if (i + extra >= text.size()) return std::nullopt;
        for (std::size_t k = 1; k <= extra; ++k) {
            const unsigned char c = byte(i + k);
            if ((c & 0xC0) != 0x80) return std::nullopt;
            cp = (cp << 6) | (c & 0x3F);
        }
        // Reject overlong forms, surrogates and values past U+10FFFF.
        static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            return std::nullopt;
        i += extra + 1;
        ++count;
    }
    return count;
}

std::string utterance_id_from_path(std::string_view path) {
    const std::string trimmed = detail::trim(path);
    if (trimmed.empty()) return {};
    const std::filesystem::path p(trimmed);
    std::string stem = p.stem().string();
    if (stem == "." || stem == "..") return {};
    return stem;
}

namespace {

constexpr std::string_view kRequired[] = {"path", "sentence", "age", "gender", "accents"};

}  // namespace

std::vector<UtteranceRecord> parse_manifest(std::istream& source) {
    std::string line;
    std::size_t line_no = 0;

    // Header.
    std::vector<std::string> header;
    while (std::getline(source, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty()) break;
    }
    if (line.empty()) throw MissingColumn("path");
    header = detail::split(line, '\t');

    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column.emplace(detail::lower(detail::trim(header[i])), i);
    }
    if (!column.contains("accents")) {
        if (auto it = column.find("accent"); it != column.end()) column.emplace("accents", it->second);
    }
    std::array<std::size_t, 5> idx{};
    for (std::size_t k = 0; k < 5; ++k) {
        auto it = column.find(std::string(kRequired[k]));
        if (it == column.end()) throw MissingColumn(std::string(kRequired[k]));
        idx[k] = it->second;
    }

    std::vector<UtteranceRecord> records;
    std::unordered_set<std::string> seen;
    while (std::getline(source, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != header.size()) {
            throw MalformedRow(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                            std::to_string(fields.size()));
        }
        UtteranceRecord rec;
        rec.audio_path = detail::trim(fields[idx[0]]);
        rec.utterance_id = utterance_id_from_path(rec.audio_path);
        if (rec.utterance_id.empty()) throw MalformedRow(line_no, "unusable audio path");
        if (std::any_of(rec.utterance_id.begin(), rec.utterance_id.end(),
                        [](unsigned char c) { return c <= ' '; })) {
            throw MalformedRow(line_no, "utterance id contains whitespace or control characters");
        }
        rec.sentence = fields[idx[1]];
        const auto length = utf8_length(rec.sentence);
        if (!length) throw MalformedRow(line_no, "sentence is not valid UTF-8");
        rec.sentence_length = *length;
        rec.length_bin = sentence_length_bin(rec.sentence_length);
        rec.age = normalize_age(fields[idx[2]]);
        rec.gender = normalize_gender(fields[idx[3]]);
        rec.accent = normalize_accent(fields[idx[4]]);
        if (!seen.insert(rec.utterance_id).second) throw DuplicateUtteranceId(rec.utterance_id);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<UtteranceRecord> parse_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open manifest " + path);
    return parse_manifest(in);
}

}  // namespace diafair
