#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace diafair {

enum class Gender { Male, Female, Other, Unknown };

enum class Age {
    Teens, Twenties, Thirties, Forties, Fifties, Sixties, Seventies, Eighties, Nineties, Unknown
};

enum class Accent {
    US, British, Indian, Australian, Canadian, NewZealander, African, Scottish,
    Filipino, Irish, Malaysian, HongKong, Singapore, Welsh, OtherAccent, Unknown
};

/// Sentence-length bins, half-open and left-inclusive: [0,10) [10,30) [30,50)
/// [50,70) [70,100) [100,inf).
enum class LengthBin { Below10, From10To30, From30To50, From50To70, From70To100, From100 };

inline constexpr std::array<Gender, 3> kGenderOrder{Gender::Male, Gender::Female, Gender::Other};

inline constexpr std::array<Age, 9> kAgeOrder{
    Age::Teens, Age::Twenties, Age::Thirties, Age::Forties, Age::Fifties,
    Age::Sixties, Age::Seventies, Age::Eighties, Age::Nineties};

// Named accents in table order, then the two classes the tables never show.
inline constexpr std::array<Accent, 15> kAccentOrder{
    Accent::US, Accent::British, Accent::Indian, Accent::Australian, Accent::Canadian,
    Accent::NewZealander, Accent::African, Accent::Scottish, Accent::Filipino, Accent::Irish,
    Accent::Malaysian, Accent::HongKong, Accent::Singapore, Accent::Welsh, Accent::OtherAccent};

inline constexpr std::array<LengthBin, 6> kLengthOrder{
    LengthBin::Below10, LengthBin::From10To30, LengthBin::From30To50,
    LengthBin::From50To70, LengthBin::From70To100, LengthBin::From100};

std::string_view to_string(Gender g);
std::string_view to_string(Age a);
std::string_view to_string(Accent a);
std::string_view to_string(LengthBin b);

Gender normalize_gender(std::string_view raw);
Age normalize_age(std::string_view raw);
Accent normalize_accent(std::string_view raw);
LengthBin sentence_length_bin(std::size_t length);

/// Inclusive lower edge and exclusive upper edge (nullopt for the open bin).
std::pair<std::size_t, std::optional<std::size_t>> bin_edges(LengthBin b);

/// Number of Unicode scalar values in a UTF-8 string, or nullopt when the
/// bytes are not valid UTF-8.
std::optional<std::size_t> utf8_length(std::string_view text);

struct UtteranceRecord {
    std::string utterance_id;
    std::string audio_path;
    std::string sentence;
    std::size_t sentence_length = 0;
    Gender gender = Gender::Unknown;
    Age age = Age::Unknown;
    Accent accent = Accent::Unknown;
    LengthBin length_bin = LengthBin::Below10;

    bool operator==(const UtteranceRecord&) const = default;
};

/// Utterance id for a manifest path: the filename without its extension.
/// Empty when the path has no usable filename.
std::string utterance_id_from_path(std::string_view path);

/// Reads a tab-separated manifest with a header row. Required columns are
/// `path`, `sentence`, `age`, `gender` and `accents` (or `accent`); any
/// other column is ignored. Rows keep their file order.
std::vector<UtteranceRecord> parse_manifest(std::istream& source);
std::vector<UtteranceRecord> parse_manifest_file(const std::string& path);

}  // namespace diafair
