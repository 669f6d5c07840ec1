#include <ramsey/colouring.hpp>
#include <ramsey/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

using std::string;
using std::string_view;
using std::vector;

namespace ramsey {

ParameterVector::ParameterVector(vector<int> avoid) :
    _avoid(std::move(avoid))
{
    for (std::size_t i = 0; i < _avoid.size(); ++i)
        if (_avoid[i] < 2)
            throw InvariantError("clique bound " + std::to_string(_avoid[i]) + " at position " + std::to_string(i + 1) + " is below 2");
}

auto ParameterVector::parse(string_view text) -> ParameterVector
{
    vector<int> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == string_view::npos)
            comma = text.size();
        auto piece = text.substr(pos, comma - pos);
        while (! piece.empty() && piece.front() == ' ')
            piece.remove_prefix(1);
        while (! piece.empty() && piece.back() == ' ')
            piece.remove_suffix(1);
        int value = 0;
        auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (piece.empty() || ec != std::errc{} || end != piece.data() + piece.size())
            throw ParseError("avoid", "expected a comma-separated list of integers, got '" + string(text) + "'");
        values.push_back(value);
        pos = comma + 1;
    }
    return ParameterVector{std::move(values)};
}

auto ParameterVector::concat(const ParameterVector & other) const -> ParameterVector
{
    auto values = _avoid;
    values.insert(values.end(), other._avoid.begin(), other._avoid.end());
    return ParameterVector{std::move(values)};
}

auto ParameterVector::sorted() const -> ParameterVector
{
    auto values = _avoid;
    std::sort(values.begin(), values.end());
    return ParameterVector{std::move(values)};
}

auto ParameterVector::to_string() const -> string
{
    string result;
    for (std::size_t i = 0; i < _avoid.size(); ++i) {
        if (i != 0)
            result += ',';
        result += std::to_string(_avoid[i]);
    }
    return result;
}

auto kind_name(Kind kind) -> string_view
{
    return kind == Kind::cyclic ? "cyclic" : "linear";
}

LengthColouring::LengthColouring(Kind kind, int order, int num_colours, vector<Colour> colours) :
    _kind(kind),
    _order(order),
    _num_colours(num_colours),
    _colours(std::move(colours))
{
    if (_order < 2)
        throw InvariantError("colouring order " + std::to_string(_order) + " is below 2");
    if (_num_colours < 1)
        throw InvariantError("colouring needs at least one colour");
    std::size_t expected = _kind == Kind::cyclic ? static_cast<std::size_t>(_order / 2) : static_cast<std::size_t>(_order - 1);
    if (_colours.size() != expected)
        throw InvariantError(string(kind_name(_kind)) + " colouring of order " + std::to_string(_order) + " needs " + std::to_string(expected) + " length assignments, got " + std::to_string(_colours.size()));
    for (std::size_t i = 0; i < _colours.size(); ++i)
        if (_colours[i] < 1 || _colours[i] > _num_colours)
            throw InvariantError("length " + std::to_string(i + 1) + " has colour " + std::to_string(_colours[i]) + " outside [1, " + std::to_string(_num_colours) + "]");
}

auto LengthColouring::linear(int order, int num_colours, vector<Colour> colours) -> LengthColouring
{
    return LengthColouring{Kind::linear, order, num_colours, std::move(colours)};
}

auto LengthColouring::cyclic(int order, int num_colours, vector<Colour> colours) -> LengthColouring
{
    return LengthColouring{Kind::cyclic, order, num_colours, std::move(colours)};
}

auto LengthColouring::colour(int length) const -> Colour
{
    if (length < 1 || length >= _order)
        throw InvariantError("length " + std::to_string(length) + " outside [1, " + std::to_string(_order - 1) + "]");
    if (_kind == Kind::cyclic && length > _order / 2)
        length = _order - length;
    return _colours[static_cast<std::size_t>(length - 1)];
}

auto LengthColouring::to_linear() const -> LengthColouring
{
    if (_kind == Kind::linear)
        return *this;
    vector<Colour> full;
    full.reserve(static_cast<std::size_t>(_order - 1));
    for (int l = 1; l < _order; ++l)
        full.push_back(colour(l));
    return linear(_order, _num_colours, std::move(full));
}

auto LengthColouring::colour_class(Colour s) const -> vector<int>
{
    vector<int> lengths;
    for (int l = 1; l < _order; ++l)
        if (colour(l) == s)
            lengths.push_back(l);
    return lengths;
}

ExplicitColouring::ExplicitColouring(int order, int num_colours, Colour fill) :
    _order(order),
    _num_colours(num_colours)
{
    if (_order < 0)
        throw InvariantError("negative order");
    if (_num_colours < 1 || _num_colours > 0xffff)
        throw InvariantError("colour count " + std::to_string(_num_colours) + " out of range");
    if (fill < 1 || fill > _num_colours)
        throw InvariantError("fill colour out of range");
    _edges.assign(static_cast<std::size_t>(_order) * static_cast<std::size_t>(std::max(_order - 1, 0)) / 2, static_cast<std::uint16_t>(fill));
}

ExplicitColouring::ExplicitColouring(int order, int num_colours, vector<Colour> upper) :
    ExplicitColouring(order, num_colours, 1)
{
    if (upper.size() != _edges.size())
        throw InvariantError("explicit colouring of order " + std::to_string(order) + " needs " + std::to_string(_edges.size()) + " edge entries, got " + std::to_string(upper.size()));
    for (std::size_t e = 0; e < upper.size(); ++e) {
        if (upper[e] < 1 || upper[e] > _num_colours)
            throw InvariantError("edge entry " + std::to_string(e) + " has colour " + std::to_string(upper[e]) + " outside [1, " + std::to_string(_num_colours) + "]");
        _edges[e] = static_cast<std::uint16_t>(upper[e]);
    }
}

auto ExplicitColouring::index(int i, int j) const -> std::size_t
{
    if (i == j)
        throw DegenerateEdge("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") joins a vertex to itself");
    if (i > j)
        std::swap(i, j);
    if (i < 0 || j >= _order)
        throw InvariantError("vertex out of range for order " + std::to_string(_order));
    auto m = static_cast<std::size_t>(_order), a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
    return a * m - a * (a + 1) / 2 + (b - a - 1);
}

auto ExplicitColouring::colour(int i, int j) const -> Colour
{
    return _edges[index(i, j)];
}

void ExplicitColouring::set(int i, int j, Colour c)
{
    if (c < 1 || c > _num_colours)
        throw InvariantError("colour " + std::to_string(c) + " out of range");
    _edges[index(i, j)] = static_cast<std::uint16_t>(c);
}

auto ExplicitColouring::entries() const -> vector<Colour>
{
    return vector<Colour>(_edges.begin(), _edges.end());
}

auto cyclic_length(int i, int j, int order) -> int
{
    if (i == j)
        throw DegenerateEdge("cyclic length of a vertex with itself");
    if (i < 0 || j < 0 || i >= order || j >= order)
        throw InvariantError("vertex out of range for order " + std::to_string(order));
    int d = i < j ? j - i : i - j;
    return std::min(d, order - d);
}

auto expand_to_explicit(const LengthColouring & c) -> ExplicitColouring
{
    ExplicitColouring result{c.order(), c.num_colours()};
    for (int i = 0; i < c.order(); ++i)
        for (int j = i + 1; j < c.order(); ++j)
            result.set(i, j, c.colour(j - i));
    return result;
}

auto check_cyclic_symmetry(const LengthColouring & c) -> bool
{
    for (int l = 1; l < c.order(); ++l)
        if (c.colour(l) != c.colour(c.order() - l))
            return false;
    return true;
}

auto to_cyclic(const LengthColouring & c) -> std::optional<LengthColouring>
{
    if (c.is_cyclic())
        return c;
    if (! check_cyclic_symmetry(c))
        return std::nullopt;
    auto stored = c.stored();
    return LengthColouring::cyclic(c.order(), c.num_colours(), vector<Colour>(stored.begin(), stored.begin() + c.order() / 2));
}

auto ColouringDocument::order() const -> int
{
    return std::visit([](const auto & c) { return c.order(); }, body);
}

auto ColouringDocument::num_colours() const -> int
{
    return std::visit([](const auto & c) { return c.num_colours(); }, body);
}

auto ColouringDocument::explicit_form() const -> ExplicitColouring
{
    if (auto e = std::get_if<ExplicitColouring>(&body))
        return *e;
    return expand_to_explicit(std::get<LengthColouring>(body));
}

namespace
{
    using nlohmann::ordered_json;

    auto require_int(const ordered_json & doc, const string & key) -> int
    {
        if (! doc.contains(key))
            throw ParseError("$." + key, "missing required field");
        const auto & v = doc[key];
        if (! v.is_number_integer())
            throw ParseError("$." + key, "expected an integer");
        return v.get<int>();
    }

    auto int_list(const ordered_json & v, const string & key) -> vector<int>
    {
        if (! v.is_array())
            throw ParseError("$." + key, "expected a list of integers");
        vector<int> result;
        result.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (! v[i].is_number_integer())
                throw ParseError("$." + key + "[" + std::to_string(i) + "]", "expected an integer");
            result.push_back(v[i].get<int>());
        }
        return result;
    }

    void write_list(std::ostringstream & out, const vector<int> & values)
    {
        out << '[';
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i != 0)
                out << ", ";
            out << values[i];
        }
        out << ']';
    }
}

auto parse_colouring(string_view text) -> ColouringDocument
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    }
    catch (const ordered_json::parse_error & e) {
        throw ParseError("$", string("malformed document: ") + e.what());
    }
    if (! doc.is_object())
        throw ParseError("$", "expected an object");

    static const vector<string> known{"kind", "order", "num_colours", "avoid", "colours", "template_colour", "comment"};
    for (const auto & [key, _] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParseError("$." + key, "unknown field");

    if (! doc.contains("kind") || ! doc["kind"].is_string())
        throw ParseError("$.kind", "expected \"linear\", \"cyclic\" or \"explicit\"");
    auto kind = doc["kind"].get<string>();
    int order = require_int(doc, "order");
    int num_colours = require_int(doc, "num_colours");
    if (! doc.contains("colours"))
        throw ParseError("$.colours", "missing required field");
    auto colours = int_list(doc["colours"], "colours");

    for (std::size_t i = 0; i < colours.size(); ++i)
        if (colours[i] < 1 || colours[i] > num_colours)
            throw ParseError("$.colours[" + std::to_string(i) + "]", "colour " + std::to_string(colours[i]) + " outside [1, " + std::to_string(num_colours) + "]");

    auto build = [&]() -> std::variant<LengthColouring, ExplicitColouring> {
        if (kind == "explicit") {
            if (order < 0)
                throw ParseError("$.order", "order must be non-negative");
            auto expected = static_cast<std::size_t>(order) * static_cast<std::size_t>(std::max(order - 1, 0)) / 2;
            if (colours.size() != expected)
                throw ParseError("$.colours", "explicit colouring of order " + std::to_string(order) + " needs m(m-1)/2 = " + std::to_string(expected) + " edge entries, got " + std::to_string(colours.size()));
            return ExplicitColouring{order, num_colours, colours};
        }
        if (kind != "linear" && kind != "cyclic")
            throw ParseError("$.kind", "expected \"linear\", \"cyclic\" or \"explicit\", got \"" + kind + "\"");
        if (order < 2)
            throw ParseError("$.order", "order must be at least 2");
        if (num_colours < 1)
            throw ParseError("$.num_colours", "at least one colour is required");
        auto expected = static_cast<std::size_t>(kind == "cyclic" ? order / 2 : order - 1);
        if (colours.size() != expected)
            throw ParseError("$.colours", kind + " colouring of order " + std::to_string(order) + " needs " + (kind == "cyclic" ? "floor(m/2)" : "m-1") + " = " + std::to_string(expected) + " length assignments, got " + std::to_string(colours.size()));
        return kind == "cyclic" ? LengthColouring::cyclic(order, num_colours, colours) : LengthColouring::linear(order, num_colours, colours);
    };

    ColouringDocument result{build(), std::nullopt, std::nullopt, {}};

    if (doc.contains("avoid")) {
        auto avoid = int_list(doc["avoid"], "avoid");
        if (avoid.size() != static_cast<std::size_t>(num_colours))
            throw ParseError("$.avoid", "expected " + std::to_string(num_colours) + " clique bounds, got " + std::to_string(avoid.size()));
        for (std::size_t i = 0; i < avoid.size(); ++i)
            if (avoid[i] < 2)
                throw ParseError("$.avoid[" + std::to_string(i) + "]", "clique bound must be at least 2");
        result.avoid = ParameterVector{avoid};
    }
    if (doc.contains("template_colour")) {
        int s = require_int(doc, "template_colour");
        if (s < 1 || s > num_colours)
            throw ParseError("$.template_colour", "colour " + std::to_string(s) + " outside [1, " + std::to_string(num_colours) + "]");
        result.template_colour = s;
    }
    if (doc.contains("comment")) {
        if (! doc["comment"].is_string())
            throw ParseError("$.comment", "expected a string");
        result.comment = doc["comment"].get<string>();
    }
    return result;
}

auto serialize_colouring(const ColouringDocument & doc) -> string
{
    std::ostringstream out;
    string kind;
    vector<int> colours;
    if (auto e = std::get_if<ExplicitColouring>(&doc.body)) {
        kind = "explicit";
        colours = e->entries();
    }
    else {
        const auto & c = std::get<LengthColouring>(doc.body);
        kind = string(kind_name(c.kind()));
        colours.assign(c.stored().begin(), c.stored().end());
    }

    out << "{\n";
    out << "  \"kind\": \"" << kind << "\",\n";
    out << "  \"order\": " << doc.order() << ",\n";
    out << "  \"num_colours\": " << doc.num_colours();
    if (doc.avoid) {
        out << ",\n  \"avoid\": ";
        write_list(out, doc.avoid->values());
    }
    out << ",\n  \"colours\": ";
    write_list(out, colours);
    if (doc.template_colour)
        out << ",\n  \"template_colour\": " << *doc.template_colour;
    if (! doc.comment.empty())
        out << ",\n  \"comment\": " << nlohmann::json(doc.comment).dump();
    out << "\n}\n";
    return out.str();
}

auto read_file(const std::filesystem::path & path) -> string
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path & path, string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (! out)
        throw Error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (! out)
        throw Error("failed writing " + path.string());
}

auto load_colouring(const std::filesystem::path & path) -> ColouringDocument
{
    return parse_colouring(read_file(path));
}

void save_colouring(const std::filesystem::path & path, const ColouringDocument & doc)
{
    write_file(path, serialize_colouring(doc));
}

}
