/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdnv/errors.hpp"

namespace sdnv {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kModelFormat = "sdnv-model";
constexpr const char* kWitnessFormat = "sdnv-witness";
constexpr const char* kPrototypeHeader = "# sdnv-prototypes v1";

Rational literal_at(const std::string& text, const std::string& where)
{
    try {
        return Rational::parse(text);
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

std::string string_at(const json& j, const std::string& where)
{
    if (!j.is_string())
        throw ParseError(where + ": expected a string literal");
    return j.get<std::string>();
}

std::size_t count_at(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ParseError(where + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

json parse_json(std::string_view text, const char* what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string rational_literal(const Rational& r) { return r.has_terminating_decimal() ? r.decimal_str() : r.str(); }

// ---------------------------------------------------------------------------
// Model documents

SdnModel ModelDocument::to_model() const
{
    if (schema_version != 1)
        throw ParseError("unsupported model schema_version " + std::to_string(schema_version));
    Rational a = literal_at(alpha, "alpha");
    if (layers.size() + 1 != sizes.size())
        throw ShapeError("model declares " + std::to_string(sizes.size()) + " layer sizes but "
                         + std::to_string(layers.size()) + " weight layers");
    std::vector<AffineLayer> affine;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string where = "layers[" + std::to_string(i) + "]";
        const Layer& l = layers[i];
        AffineLayer out;
        out.rows = l.weights.size();
        out.cols = out.rows ? l.weights.front().size() : 0;
        if (out.rows != sizes[i + 1] || out.cols != sizes[i])
            throw ShapeError(where + ".weights: expected " + std::to_string(sizes[i + 1]) + "x"
                             + std::to_string(sizes[i]) + ", got " + std::to_string(out.rows) + "x"
                             + std::to_string(out.cols));
        for (std::size_t r = 0; r < out.rows; ++r) {
            if (l.weights[r].size() != out.cols)
                throw ShapeError(where + ".weights[" + std::to_string(r) + "]: expected "
                                 + std::to_string(out.cols) + " entries");
            for (std::size_t c = 0; c < out.cols; ++c)
                out.weights.push_back(literal_at(
                    l.weights[r][c], where + ".weights[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
        }
        if (l.bias.size() != out.rows)
            throw ShapeError(where + ".bias: expected " + std::to_string(out.rows) + " entries");
        for (std::size_t r = 0; r < out.rows; ++r)
            out.bias.push_back(literal_at(l.bias[r], where + ".bias[" + std::to_string(r) + "]"));
        affine.push_back(std::move(out));
    }
    return SdnModel(sizes, std::move(affine), group_size, std::move(a));
}

ModelDocument ModelDocument::from_model(const SdnModel& model)
{
    ModelDocument doc;
    doc.sizes = model.sizes();
    doc.group_size = model.group_size();
    doc.alpha = rational_literal(model.alpha());
    for (const auto& l : model.layers()) {
        Layer out;
        for (std::size_t r = 0; r < l.rows; ++r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < l.cols; ++c)
                row.push_back(rational_literal(l.weight(r, c)));
            out.weights.push_back(std::move(row));
            out.bias.push_back(rational_literal(l.bias[r]));
        }
        doc.layers.push_back(std::move(out));
    }
    return doc;
}

std::string ModelDocument::render() const
{
    json j;
    j["format"] = kModelFormat;
    j["schema_version"] = schema_version;
    j["m"] = layers.size();
    j["sizes"] = sizes;
    j["group_size"] = group_size;
    j["alpha"] = alpha;
    json ls = json::array();
    for (const auto& l : layers) {
        json lj;
        lj["weights"] = l.weights;
        lj["bias"] = l.bias;
        ls.push_back(std::move(lj));
    }
    j["layers"] = std::move(ls);
    return j.dump(1) + "\n";
}

ModelDocument ModelDocument::parse(std::string_view text)
{
    json j = parse_json(text, "model document");
    const std::string root = "model";
    if (string_at(field(j, "format", root), "format") != kModelFormat)
        throw ParseError("format: expected \"" + std::string(kModelFormat) + "\"");
    ModelDocument doc;
    doc.schema_version = static_cast<int>(count_at(field(j, "schema_version", root), "schema_version"));
    const json& sizes = field(j, "sizes", root);
    if (!sizes.is_array())
        throw ParseError("sizes: expected an array");
    for (std::size_t i = 0; i < sizes.size(); ++i)
        doc.sizes.push_back(count_at(sizes[i], "sizes[" + std::to_string(i) + "]"));
    doc.group_size = count_at(field(j, "group_size", root), "group_size");
    doc.alpha = string_at(field(j, "alpha", root), "alpha");
    const std::size_t m = count_at(field(j, "m", root), "m");
    const json& layers = field(j, "layers", root);
    if (!layers.is_array())
        throw ParseError("layers: expected an array");
    if (m != layers.size())
        throw ShapeError("m = " + std::to_string(m) + " but " + std::to_string(layers.size()) + " layers given");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string where = "layers[" + std::to_string(i) + "]";
        Layer l;
        const json& w = field(layers[i], "weights", where);
        if (!w.is_array())
            throw ParseError(where + ".weights: expected an array of rows");
        for (std::size_t r = 0; r < w.size(); ++r) {
            const std::string rw = where + ".weights[" + std::to_string(r) + "]";
            if (!w[r].is_array())
                throw ParseError(rw + ": expected an array");
            std::vector<std::string> row;
            for (std::size_t c = 0; c < w[r].size(); ++c)
                row.push_back(string_at(w[r][c], rw + "[" + std::to_string(c) + "]"));
            l.weights.push_back(std::move(row));
        }
        const json& b = field(layers[i], "bias", where);
        if (!b.is_array())
            throw ParseError(where + ".bias: expected an array");
        for (std::size_t r = 0; r < b.size(); ++r)
            l.bias.push_back(string_at(b[r], where + ".bias[" + std::to_string(r) + "]"));
        doc.layers.push_back(std::move(l));
    }
    return doc;
}

SdnModel load_model(const std::filesystem::path& path)
{
    try {
        return ModelDocument::parse(read_file(path)).to_model();
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw std::decay_t<decltype(e)>(path.string() + ": " + e.what());
    }
}

void save_model(const ModelDocument& doc, const std::filesystem::path& path) { write_file_atomic(path, doc.render()); }

// ---------------------------------------------------------------------------
// IDX

namespace {

std::uint32_t be32(std::string_view bytes, std::size_t offset, const char* what)
{
    if (bytes.size() < offset + 4)
        throw ParseError(std::string(what) + ": truncated header");
    auto b = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])); };
    return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

} // namespace

DatasetSlice parse_idx(std::string_view images, std::string_view labels, std::size_t limit)
{
    constexpr std::uint32_t kImageMagic = 0x00000803;
    constexpr std::uint32_t kLabelMagic = 0x00000801;
    auto hex = [](std::uint32_t v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "0x%08x", v);
        return std::string(buf);
    };
    if (std::uint32_t m = be32(images, 0, "image file"); m != kImageMagic)
        throw ParseError("image file: bad magic " + hex(m) + ", expected " + hex(kImageMagic));
    if (std::uint32_t m = be32(labels, 0, "label file"); m != kLabelMagic)
        throw ParseError("label file: bad magic " + hex(m) + ", expected " + hex(kLabelMagic));
    const std::size_t n_images = be32(images, 4, "image file");
    const std::size_t rows = be32(images, 8, "image file");
    const std::size_t cols = be32(images, 12, "image file");
    const std::size_t n_labels = be32(labels, 4, "label file");
    if (n_images != n_labels)
        throw ParseError("image/label count mismatch: " + std::to_string(n_images) + " images, "
                         + std::to_string(n_labels) + " labels");
    const std::size_t pixels = rows * cols;
    if (images.size() < 16 + n_images * pixels)
        throw ParseError("image file: truncated payload (" + std::to_string(images.size() - 16) + " of "
                         + std::to_string(n_images * pixels) + " bytes)");
    if (labels.size() < 8 + n_labels)
        throw ParseError("label file: truncated payload");

    DatasetSlice slice;
    slice.rows = rows;
    slice.cols = cols;
    const std::size_t n = std::min(limit, n_images);
    slice.images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point img(pixels);
        for (std::size_t p = 0; p < pixels; ++p)
            img[p] = Rational(static_cast<long>(static_cast<unsigned char>(images[16 + i * pixels + p])), 255);
        slice.images.push_back(std::move(img));
        slice.labels.push_back(static_cast<std::uint8_t>(labels[8 + i]));
    }
    return slice;
}

DatasetSlice load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::size_t limit)
{
    DatasetSlice s = parse_idx(read_file(images), read_file(labels), limit);
    s.source = images.string() + " + " + labels.string();
    return s;
}

// ---------------------------------------------------------------------------
// PGM

std::string encode_pgm(std::span<const Rational> pixels, std::size_t width, std::size_t height)
{
    if (pixels.size() != width * height)
        throw ShapeError("PGM needs " + std::to_string(width * height) + " pixels, got " + std::to_string(pixels.size()));
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    const Rational half(1, 2);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const Rational& v = pixels[i];
        if (v < Rational(0) || v > Rational(1))
            throw InvariantError("pixel " + std::to_string(i) + " = " + v.str() + " outside [0, 1]");
        out.push_back(static_cast<char>((v * Rational(255) + half).floor().get_ui()));
    }
    return out;
}

void write_pgm(std::span<const Rational> pixels, std::size_t width, std::size_t height,
               const std::filesystem::path& path)
{
    write_file_atomic(path, encode_pgm(pixels, width, height));
}

// ---------------------------------------------------------------------------
// Prototypes

std::string render_prototypes(const std::vector<Prototype>& prototypes)
{
    std::string out = std::string(kPrototypeHeader) + "\n";
    for (const auto& p : prototypes) {
        out += std::to_string(p.class_id) + " " + p.provenance.str();
        for (const auto& v : p.values)
            out += " " + rational_literal(v);
        out += "\n";
    }
    return out;
}

std::vector<Prototype> parse_prototypes(std::string_view text)
{
    std::vector<Prototype> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        const std::string where = "prototype line " + std::to_string(line_no);
        std::istringstream fields(line);
        std::string cls, prov, tok;
        if (!(fields >> cls >> prov))
            throw ParseError(where + ": expected class id and provenance");
        Prototype p;
        try {
            std::size_t used = 0;
            p.class_id = std::stoul(cls, &used);
            if (used != cls.size())
                throw std::invalid_argument(cls);
        } catch (const std::exception&) {
            throw ParseError(where + ": invalid class id \"" + cls + "\"");
        }
        p.provenance = Provenance::parse(prov);
        while (fields >> tok) {
            Rational v = literal_at(tok, where + " value " + std::to_string(p.values.size()));
            if (v < Rational(0) || v > Rational(1))
                throw InvariantError(where + ": value " + tok + " outside [0, 1]");
            p.values.push_back(std::move(v));
        }
        if (p.values.empty())
            throw ParseError(where + ": no values");
        if (dim == 0)
            dim = p.values.size();
        else if (p.values.size() != dim)
            throw ShapeError(where + ": " + std::to_string(p.values.size()) + " values, expected " + std::to_string(dim));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Prototype> load_prototypes(const std::filesystem::path& path)
{
    try {
        return parse_prototypes(read_file(path));
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_prototypes(const std::vector<Prototype>& prototypes, const std::filesystem::path& path)
{
    write_file_atomic(path, render_prototypes(prototypes));
}

// ---------------------------------------------------------------------------
// Witnesses

std::string render_witness(const BoundaryWitness& w)
{
    json j;
    j["format"] = kWitnessFormat;
    j["schema_version"] = 1;
    j["target"] = w.target;
    j["boundary"] = w.boundary;
    j["epsilon"] = w.epsilon.str();
    j["pattern"] = w.pattern.str();
    j["pattern_position"] = w.pattern_position;
    j["backend"] = w.backend;
    if (w.meaningful) {
        json m;
        m["radius"] = w.meaningful->radius.str();
        m["strict"] = w.meaningful->strict;
        json proto = json::array();
        for (const auto& v : w.meaningful->prototype)
            proto.push_back(v.str());
        m["prototype"] = std::move(proto);
        j["meaningful"] = std::move(m);
    } else {
        j["meaningful"] = nullptr;
    }
    json input = json::array();
    for (const auto& v : w.input)
        input.push_back(v.str());
    j["input"] = std::move(input);
    json a = json::object();
    for (const auto& [v, value] : w.assignment)
        a[v.name()] = value.str();
    j["assignment"] = std::move(a);
    return j.dump(1) + "\n";
}

BoundaryWitness parse_witness(std::string_view text)
{
    json j = parse_json(text, "witness document");
    const std::string root = "witness";
    if (string_at(field(j, "format", root), "format") != kWitnessFormat)
        throw ParseError("format: expected \"" + std::string(kWitnessFormat) + "\"");
    BoundaryWitness w;
    w.target = count_at(field(j, "target", root), "target");
    w.boundary = count_at(field(j, "boundary", root), "boundary");
    w.epsilon = literal_at(string_at(field(j, "epsilon", root), "epsilon"), "epsilon");
    w.pattern = ActivationPattern::parse(string_at(field(j, "pattern", root), "pattern"));
    w.pattern_position = count_at(field(j, "pattern_position", root), "pattern_position");
    w.backend = string_at(field(j, "backend", root), "backend");
    const json& m = field(j, "meaningful", root);
    if (!m.is_null()) {
        MeaningfulRegion region;
        region.radius = literal_at(string_at(field(m, "radius", "meaningful"), "meaningful.radius"), "meaningful.radius");
        const json& strict = field(m, "strict", "meaningful");
        if (!strict.is_boolean())
            throw ParseError("meaningful.strict: expected a boolean");
        region.strict = strict.get<bool>();
        const json& proto = field(m, "prototype", "meaningful");
        if (!proto.is_array())
            throw ParseError("meaningful.prototype: expected an array");
        for (std::size_t i = 0; i < proto.size(); ++i) {
            const std::string where = "meaningful.prototype[" + std::to_string(i) + "]";
            region.prototype.push_back(literal_at(string_at(proto[i], where), where));
        }
        w.meaningful = std::move(region);
    }
    const json& input = field(j, "input", root);
    if (!input.is_array())
        throw ParseError("input: expected an array");
    for (std::size_t i = 0; i < input.size(); ++i) {
        const std::string where = "input[" + std::to_string(i) + "]";
        w.input.push_back(literal_at(string_at(input[i], where), where));
    }
    const json& a = field(j, "assignment", root);
    if (!a.is_object())
        throw ParseError("assignment: expected an object");
    for (const auto& [name, value] : a.items()) {
        auto v = VarId::parse(name);
        if (!v)
            throw ParseError("assignment: unknown variable \"" + name + "\"");
        const std::string where = "assignment." + name;
        w.assignment[*v] = literal_at(string_at(value, where), where);
    }
    return w;
}

BoundaryWitness load_witness(const std::filesystem::path& path)
{
    try {
        return parse_witness(read_file(path));
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_witness(const BoundaryWitness& witness, const std::filesystem::path& path)
{
    write_file_atomic(path, render_witness(witness));
}

std::string render_report_summary(const std::vector<SearchReport>& reports)
{
    auto secs = [](std::chrono::nanoseconds ns) { return std::chrono::duration<double>(ns).count(); };
    json runs = json::array();
    for (const auto& r : reports) {
        json rj;
        rj["target"] = r.target;
        rj["boundary"] = r.boundary;
        rj["epsilon"] = r.epsilon.str();
        rj["backend"] = r.backend;
        rj["prototype_index"] = r.prototype_index ? json(*r.prototype_index) : json(nullptr);
        json counts;
        for (auto s : {PatternStatus::Sat, PatternStatus::Unsat, PatternStatus::Unknown, PatternStatus::Error,
                       PatternStatus::Rejected})
            counts[pattern_status_name(s)] = r.count(s);
        rj["counts"] = std::move(counts);
        json patterns = json::array();
        for (const auto& o : r.outcomes) {
            json oj;
            oj["position"] = o.position;
            oj["pattern"] = o.pattern.str();
            oj["status"] = pattern_status_name(o.status);
            oj["seconds"] = secs(o.elapsed);
            if (!o.diagnostic.empty())
                oj["diagnostic"] = o.diagnostic;
            patterns.push_back(std::move(oj));
        }
        rj["patterns"] = std::move(patterns);
        json checked = json::array();
        for (const auto& p : r.checked)
            checked.push_back(p.str());
        rj["checked"] = std::move(checked);
        rj["wall_seconds"] = secs(r.wall);
        runs.push_back(std::move(rj));
    }
    json j;
    j["runs"] = std::move(runs);
    return j.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

} // namespace sdnv
