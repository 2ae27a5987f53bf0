#include "dirate/sequence_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

namespace dirate {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int parse_symbol(std::string_view token, const Alphabet& alphabet, const char* which,
                 std::size_t line) {
    token = trim(token);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(std::string("cannot parse ") + which + " symbol '" +
                         std::string(token) + "' as an integer", line);
    }
    if (!alphabet.contains(value)) {
        throw ParseError(std::string(which) + " symbol " + std::to_string(value) +
                         " out of range for alphabet of size " + std::to_string(alphabet.size),
                         line);
    }
    return static_cast<int>(value);
}

} // namespace

SymbolSequencePair load_sequences(const std::string& path, SequenceFormat format,
                                  Alphabet a, Alphabet b, int k) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open sequence file: " + path);
    }

    std::vector<int> xs, ys;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        std::size_t split = std::string_view::npos;
        bool use_comma = false;
        switch (format) {
        case SequenceFormat::csv:
            use_comma = true;
            break;
        case SequenceFormat::whitespace:
            use_comma = false;
            break;
        case SequenceFormat::auto_detect:
            use_comma = line.find(',') != std::string_view::npos;
            break;
        }
        if (use_comma) {
            split = line.find(',');
            if (split == std::string_view::npos) {
                throw ParseError("expected 'x,y' but found no comma", line_no);
            }
        } else {
            split = line.find_first_of(" \t");
            if (split == std::string_view::npos) {
                throw ParseError("expected two whitespace-separated symbols", line_no);
            }
        }
        std::string_view left = line.substr(0, split);
        std::string_view right = line.substr(split + 1);
        if (trim(right).find_first_of(" \t,") != std::string_view::npos) {
            throw ParseError("expected exactly two symbols per row", line_no);
        }
        xs.push_back(parse_symbol(left, a, "x", line_no));
        ys.push_back(parse_symbol(right, b, "y", line_no));
    }

    if (static_cast<std::int64_t>(xs.size()) <= k) {
        throw ValidationError("file " + path + " has " + std::to_string(xs.size()) +
                              " data rows; need more than k = " + std::to_string(k));
    }
    return SymbolSequencePair(std::move(xs), std::move(ys), a, b, k);
}

void save_sequences(const std::string& path, const SymbolSequencePair& pair) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot open output file: " + path);
    }
    const auto& x = pair.x();
    const auto& y = pair.y();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << x[i] << ',' << y[i] << '\n';
    }
    if (!out) {
        throw ValidationError("write failed: " + path);
    }
}

} // namespace dirate
