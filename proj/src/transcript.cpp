#include <sstream>

#include "scf/harness.hpp"

namespace scf {

// Line format, one session per block:
//   SCF1
//   H key=value
//   F <seq> <A|B|F> <tag> <hex|->
//   O <A|B> <hex|!>
//   N <engine note>
//   E
// Tags and header tokens never contain whitespace; '!' marks abort.

static std::string escape_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '%' || c == '=') {
      static const char* hex = "0123456789abcdef";
      out.push_back('%');
      out.push_back(hex[(static_cast<unsigned char>(c) >> 4) & 0xf]);
      out.push_back(hex[static_cast<unsigned char>(c) & 0xf]);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

static std::string unescape_token(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string Transcript::to_text() const {
  std::ostringstream os;
  os << "SCF1\n";
  for (const auto& [k, v] : header) os << "H " << escape_token(k) << "=" << escape_token(v) << "\n";
  for (const auto& f : frames) {
    os << "F " << f.seq << " " << f.sender << " " << escape_token(f.tag) << " "
       << (f.payload.empty() ? "-" : to_hex(f.payload)) << "\n";
  }
  os << "O A " << (out_a ? (out_a->empty() ? "-" : to_hex(*out_a)) : "!") << "\n";
  os << "O B " << (out_b ? (out_b->empty() ? "-" : to_hex(*out_b)) : "!") << "\n";
  if (!engine_note.empty()) os << "N " << escape_token(engine_note) << "\n";
  os << "E\n";
  return os.str();
}

static Outcome parse_outcome(const std::string& tok) {
  if (tok == "!") return std::nullopt;
  if (tok == "-") return Bytes{};
  return from_hex(tok);
}

Transcript Transcript::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "SCF1") throw ParseError("transcript: missing SCF1 magic");
  Transcript t;
  bool saw_end = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "H") {
      std::string kv;
      ls >> kv;
      size_t eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("transcript: bad header line");
      t.header.emplace_back(unescape_token(kv.substr(0, eq)), unescape_token(kv.substr(eq + 1)));
    } else if (kind == "F") {
      TranscriptFrame f;
      std::string sender, tag, payload;
      ls >> f.seq >> sender >> tag >> payload;
      if (sender.size() != 1 || payload.empty()) throw ParseError("transcript: bad frame line");
      f.sender = sender[0];
      f.tag = unescape_token(tag);
      if (payload != "-") f.payload = from_hex(payload);
      t.frames.push_back(std::move(f));
    } else if (kind == "O") {
      std::string who, val;
      ls >> who >> val;
      if (who == "A")
        t.out_a = parse_outcome(val);
      else if (who == "B")
        t.out_b = parse_outcome(val);
      else
        throw ParseError("transcript: bad outcome line");
    } else if (kind == "N") {
      std::string note;
      ls >> note;
      t.engine_note = unescape_token(note);
    } else if (kind == "E") {
      saw_end = true;
      break;
    } else {
      throw ParseError("transcript: unknown line kind '" + kind + "'");
    }
  }
  if (!saw_end) throw ParseError("transcript: missing end marker");
  return t;
}

}  // namespace scf
