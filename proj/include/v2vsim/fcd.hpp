// v2vsim/fcd.hpp - SUMO floating-car-data ingestion: FCD XML parse/serialize and the CSV trace form
#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "v2vsim/detail/text.hpp"
#include "v2vsim/error.hpp"
#include "v2vsim/trace.hpp"

namespace v2vsim {

namespace detail {

// Tokenizer for the XML subset SUMO emits: prolog, comments, elements with
// quoted attributes, character data (skipped). No namespaces, no CDATA.
class XmlCursor {
public:
    struct Attr {
        std::string name;
        std::string value;
    };
    struct Tag {
        std::string name;
        std::vector<Attr> attrs;
        bool closing = false;       // </name>
        bool self_closing = false;  // <name .../>
        std::size_t line = 0;
    };

    explicit XmlCursor(std::string text) : text_(std::move(text)) {
        // UTF-8 BOM
        if (text_.size() >= 3 && text_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
    }

    std::size_t line() const { return line_; }

    // Next element tag, or nullopt at end of document.
    std::optional<Tag> next_tag() {
        while (true) {
            skip_char_data();
            if (at_end()) return std::nullopt;
            std::size_t tag_line = line_;
            consume();  // '<'
            if (at_end()) throw ParseError("unexpected end of document inside tag", line_);
            char c = peek();
            if (c == '?') {
                skip_until("?>");
                continue;
            }
            if (c == '!') {
                if (text_.compare(pos_, 3, "!--") == 0) {
                    skip_until("-->");
                } else {
                    skip_until(">");  // DOCTYPE and friends
                }
                continue;
            }
            Tag tag;
            tag.line = tag_line;
            if (c == '/') {
                consume();
                tag.closing = true;
                tag.name = read_name();
                skip_ws();
                expect('>');
                return tag;
            }
            tag.name = read_name();
            while (true) {
                skip_ws();
                if (at_end()) throw ParseError("unexpected end of document inside <" + tag.name + ">", line_);
                if (peek() == '>') {
                    consume();
                    return tag;
                }
                if (peek() == '/') {
                    consume();
                    expect('>');
                    tag.self_closing = true;
                    return tag;
                }
                Attr attr;
                attr.name = read_name();
                skip_ws();
                expect('=');
                skip_ws();
                attr.value = read_quoted();
                tag.attrs.push_back(std::move(attr));
            }
        }
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char consume() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void expect(char want) {
        if (at_end() || peek() != want)
            throw ParseError(std::string("expected '") + want + "'", line_);
        consume();
    }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
            consume();
    }

    void skip_char_data() {
        while (!at_end() && peek() != '<') consume();
    }

    void skip_until(std::string_view terminator) {
        auto found = text_.find(terminator, pos_);
        if (found == std::string::npos)
            throw ParseError("unterminated '" + std::string(terminator) + "'", line_);
        while (pos_ < found + terminator.size()) consume();
    }

    std::string read_name() {
        std::string name;
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '>' || c == '/' || c == '=')
                break;
            name.push_back(consume());
        }
        if (name.empty()) throw ParseError("expected element or attribute name", line_);
        return name;
    }

    std::string read_quoted() {
        if (at_end() || (peek() != '"' && peek() != '\''))
            throw ParseError("expected quoted attribute value", line_);
        char quote = consume();
        std::string raw;
        while (true) {
            if (at_end()) throw ParseError("unterminated attribute value", line_);
            char c = consume();
            if (c == quote) break;
            raw.push_back(c);
        }
        return decode_entities(raw);
    }

    std::string decode_entities(const std::string& raw) {
        if (raw.find('&') == std::string::npos) return raw;
        std::string out;
        out.reserve(raw.size());
        std::size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] != '&') {
                out.push_back(raw[i++]);
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string::npos) throw ParseError("unterminated entity reference", line_);
            std::string_view ent(raw.data() + i + 1, semi - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent[0] == '#') {
                long long code = ent[1] == 'x' || ent[1] == 'X'
                                     ? std::stoll(std::string(ent.substr(2)), nullptr, 16)
                                     : std::stoll(std::string(ent.substr(1)), nullptr, 10);
                if (code < 0 || code > 0x10FFFF) throw ParseError("character reference out of range", line_);
                append_utf8(out, static_cast<unsigned>(code));
            } else {
                throw ParseError("unknown entity '&" + std::string(ent) + ";'", line_);
            }
            i = semi + 1;
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

inline const std::string* find_attr(const XmlCursor::Tag& tag, std::string_view name) {
    for (const auto& a : tag.attrs)
        if (a.name == name) return &a.value;
    return nullptr;
}

inline const std::string& require_attr(const XmlCursor::Tag& tag, std::string_view name) {
    if (const auto* v = find_attr(tag, name)) return *v;
    throw ParseError("element <" + tag.name + ">: missing attribute '" + std::string(name) + "'",
                     tag.line);
}

inline std::string slurp(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline void write_xml_escaped(std::ostream& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out << "&amp;"; break;
            case '<': out << "&lt;"; break;
            case '>': out << "&gt;"; break;
            case '"': out << "&quot;"; break;
            case '\'': out << "&apos;"; break;
            default: out << c;
        }
    }
}

}  // namespace detail

// Parses a SUMO FCD export: one Snapshot per <timestep>, in document order.
// Unknown elements are skipped; timestep times must be strictly increasing.
inline Timeline parse_fcd(std::istream& in, const ClassMap& class_map = default_class_map()) {
    detail::XmlCursor cursor(detail::slurp(in));

    Timeline timeline;
    std::vector<std::string> open;  // element stack
    bool saw_root = false;

    auto snapshot_for = [&](const detail::XmlCursor::Tag& tag) -> Snapshot {
        Snapshot snap;
        snap.time = detail::parse_double(detail::require_attr(tag, "time"), "attribute 'time'", tag.line);
        if (!timeline.snapshots.empty() && snap.time <= timeline.snapshots.back().time) {
            throw ParseError("timestep times not strictly increasing: " +
                                 detail::format_double(snap.time) + " after " +
                                 detail::format_double(timeline.snapshots.back().time),
                             tag.line);
        }
        return snap;
    };

    auto state_for = [&](const detail::XmlCursor::Tag& tag) -> VehicleState {
        VehicleState s;
        s.id = detail::require_attr(tag, "id");
        if (s.id.empty()) throw ParseError("element <vehicle>: empty attribute 'id'", tag.line);
        s.x = detail::parse_double(detail::require_attr(tag, "x"), "attribute 'x'", tag.line);
        s.y = detail::parse_double(detail::require_attr(tag, "y"), "attribute 'y'", tag.line);
        s.speed = detail::parse_double(detail::require_attr(tag, "speed"), "attribute 'speed'", tag.line);
        if (s.speed < 0.0)
            throw ParseError("element <vehicle id='" + s.id + "'>: negative speed", tag.line);
        const std::string* type = detail::find_attr(tag, "type");
        s.vclass = classify(type ? *type : std::string_view{}, class_map);
        return s;
    };

    auto add_state = [&](VehicleState&& s, std::size_t line) {
        Snapshot& snap = timeline.snapshots.back();
        if (snap.find(s.id))
            throw ParseError("duplicate vehicle id '" + s.id + "' within one timestep", line);
        snap.states.push_back(std::move(s));
    };

    while (auto tag = cursor.next_tag()) {
        if (tag->closing) {
            if (open.empty() || open.back() != tag->name)
                throw ParseError("mismatched closing tag </" + tag->name + ">", tag->line);
            open.pop_back();
            continue;
        }
        if (!saw_root) {
            if (tag->name != "fcd-export")
                throw ParseError("expected root element <fcd-export>, got <" + tag->name + ">",
                                 tag->line);
            saw_root = true;
            if (!tag->self_closing) open.push_back(tag->name);
            continue;
        }
        if (open.empty())
            throw ParseError("content after closed root element", tag->line);
        bool in_root = open.size() == 1;
        bool in_timestep = open.size() == 2 && open[1] == "timestep";
        if (in_root && tag->name == "timestep") {
            timeline.snapshots.push_back(snapshot_for(*tag));
        } else if (in_timestep && tag->name == "vehicle") {
            add_state(state_for(*tag), tag->line);
        }
        // other elements (e.g. <person>) are skipped but still tracked for nesting
        if (!tag->self_closing) open.push_back(tag->name);
    }
    if (!open.empty())
        throw ParseError("unexpected end of document: <" + open.back() + "> never closed",
                         cursor.line());
    if (!saw_root) throw ParseError("empty document: no <fcd-export> root", cursor.line());

    timeline.step = median_step(timeline.snapshots);
    return timeline;
}

// Serializes a Timeline back to FCD XML. Numbers use the shortest decimal
// form that reparses to the exact same double, so parse -> write -> parse is
// a field-exact round trip. The class is written as the canonical type name.
inline void write_fcd(const Timeline& timeline, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<fcd-export>\n";
    for (const auto& snap : timeline.snapshots) {
        if (snap.states.empty()) {
            out << "    <timestep time=\"" << detail::format_double(snap.time) << "\"/>\n";
            continue;
        }
        out << "    <timestep time=\"" << detail::format_double(snap.time) << "\">\n";
        for (const auto& s : snap.states) {
            out << "        <vehicle id=\"";
            detail::write_xml_escaped(out, s.id);
            out << "\" x=\"" << detail::format_double(s.x) << "\" y=\"" << detail::format_double(s.y)
                << "\" speed=\"" << detail::format_double(s.speed) << "\" type=\"" << to_string(s.vclass)
                << "\"/>\n";
        }
        out << "    </timestep>\n";
    }
    out << "</fcd-export>\n";
}

// Tabular trace form: header `time,id,x,y,speed,type`, rows grouped by
// non-decreasing time. An empty type column means private traffic.
inline Timeline parse_trace_csv(std::istream& in, const ClassMap& class_map = default_class_map()) {
    std::string text = detail::slurp(in);
    auto lines = detail::split(text, '\n');
    if (lines.empty() || detail::trim(lines[0]).empty())
        throw ParseError("empty CSV trace", 1);

    const char* expected = "time,id,x,y,speed,type";
    {
        auto cols = detail::split(detail::trim(lines[0]), ',');
        std::string got;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) got.push_back(',');
            got += std::string(detail::trim(cols[i]));
        }
        if (got != expected)
            throw ParseError("bad CSV header '" + got + "' (want '" + expected + "')", 1);
    }

    Timeline timeline;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto line = detail::trim(lines[li]);
        if (line.empty()) continue;
        auto f = detail::split(line, ',');
        if (f.size() != 6)
            throw ParseError("expected 6 fields, got " + std::to_string(f.size()), li + 1);
        double time = detail::parse_double(f[0], "column 'time'", li + 1);
        VehicleState s;
        s.id = std::string(detail::trim(f[1]));
        if (s.id.empty()) throw ParseError("empty vehicle id", li + 1);
        s.x = detail::parse_double(f[2], "column 'x'", li + 1);
        s.y = detail::parse_double(f[3], "column 'y'", li + 1);
        s.speed = detail::parse_double(f[4], "column 'speed'", li + 1);
        if (s.speed < 0.0) throw ParseError("negative speed for vehicle '" + s.id + "'", li + 1);
        s.vclass = classify(detail::trim(f[5]), class_map);

        if (timeline.snapshots.empty() || time > timeline.snapshots.back().time) {
            timeline.snapshots.push_back(Snapshot{time, {}});
        } else if (time < timeline.snapshots.back().time) {
            throw ParseError("rows not grouped by non-decreasing time", li + 1);
        }
        Snapshot& snap = timeline.snapshots.back();
        if (snap.find(s.id))
            throw ParseError("duplicate vehicle id '" + s.id + "' within one time group", li + 1);
        snap.states.push_back(std::move(s));
    }
    timeline.step = median_step(timeline.snapshots);
    return timeline;
}

}  // namespace v2vsim
