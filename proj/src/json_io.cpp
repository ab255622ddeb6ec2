#include "magnus/json_io.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace magnus {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("json: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long long integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<long long>();
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

Json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

mpz_class integer_value(const Json& j, const char* what) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) fail(std::string(what) + ": not a decimal integer");
    return z;
  }
  fail(std::string(what) + " must be an integer or a decimal string");
}

template <class S>
Json series_json(const Series<S>& s) {
  Json comps = Json::object();
  for (int m = 0; m <= s.trunc(); ++m) {
    const auto& comp = s.component(m);
    if (comp.empty()) continue;
    Json terms = Json::array();
    for (const auto& [code, c] : comp) {
      Json t;
      t["word"] = s.decode(m, code);
      if constexpr (ScalarTraits<S>::exact) {
        t["num"] = integer_json(c.get_num());
        t["den"] = integer_json(c.get_den());
      } else {
        t["val"] = c;
      }
      terms.push_back(std::move(t));
    }
    comps[std::to_string(m)] = std::move(terms);
  }
  Json j;
  j["dim_h"] = s.dim();
  j["trunc"] = s.trunc();
  j["mode"] = ScalarTraits<S>::mode;
  j["components"] = std::move(comps);
  return j;
}

template <class S>
Series<S> series_from(const Json& j) {
  const long long n = integer(field(j, "dim_h"), "dim_h");
  const long long d = integer(field(j, "trunc"), "trunc");
  if (n < 1 || d < 0 || d > 64) fail("dim_h/trunc out of range");
  const Json& mode = field(j, "mode");
  if (!mode.is_string() || (mode != "exact" && mode != "float")) fail("mode must be \"exact\" or \"float\"");
  if (ScalarTraits<S>::exact && mode != "exact") fail("float series where an exact one is required");
  Series<S> s(static_cast<int>(n), static_cast<int>(d));
  const Json& comps = field(j, "components");
  if (!comps.is_object()) fail("components must be an object");
  for (const auto& [key, terms] : comps.items()) {
    std::size_t used = 0;
    int m = -1;
    try {
      m = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || m < 0 || m > d) fail("bad degree key \"" + key + "\"");
    if (!terms.is_array()) fail("component " + key + " must be an array");
    for (const Json& t : terms) {
      const Json& w = field(t, "word");
      if (!w.is_array() || int(w.size()) != m) fail("word length differs from its degree " + key);
      Word word;
      for (const Json& x : w) {
        const long long letter = integer(x, "letter");
        if (letter < 1 || letter > n) fail("letter out of range");
        word.push_back(int(letter));
      }
      if (t.contains("val")) {
        if constexpr (ScalarTraits<S>::exact) {
          fail("float entry in an exact series");
        } else {
          s.add_word(word, number(t.at("val"), "val"));
        }
      } else {
        const mpz_class num = integer_value(field(t, "num"), "num");
        const mpz_class den = integer_value(field(t, "den"), "den");
        if (den == 0) fail("zero denominator");
        Rational q(num, den);
        q.canonicalize();
        if constexpr (ScalarTraits<S>::exact) {
          s.add_word(word, q);
        } else {
          s.add_word(word, q.get_d());
        }
      }
    }
  }
  return s;
}

FreeEndo endo_from(const Json& images, long long n, const char* what) {
  if (!images.is_object()) fail(std::string(what) + " must be an object");
  std::vector<FreeWord> out;
  for (long long i = 1; i <= n; ++i) {
    const std::string key = std::to_string(i);
    if (!images.contains(key)) fail(std::string(what) + " lacks generator " + key);
    const Json& w = images.at(key);
    std::vector<int> letters;
    if (w.is_string()) {
      letters = parse_word(w.get<std::string>()).letters();
    } else if (w.is_array()) {
      for (const Json& x : w) letters.push_back(int(integer(x, "letter")));
    } else {
      fail(std::string(what) + ": image must be a letter array or a word string");
    }
    for (int x : letters)
      if (x == 0 || std::abs(x) > n) fail(std::string(what) + ": letter out of range");
    out.emplace_back(std::move(letters));
  }
  if (images.size() != std::size_t(n)) fail(std::string(what) + " has entries beyond n");
  return FreeEndo(int(n), std::move(out));
}

Json endo_json(const FreeEndo& f) {
  Json j = Json::object();
  for (int i = 1; i <= f.rank(); ++i) j[std::to_string(i)] = f.image(i).letters();
  return j;
}

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty()) throw std::invalid_argument("complex: cannot parse \"" + whole + "\"");
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("complex: cannot parse \"" + whole + "\"");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("complex: cannot parse \"" + whole + "\"");
  return v;
}

}  // namespace

const char* library_version() { return MAGNUS_VERSION; }

Json artifact(const std::string& schema, const Json& config) {
  Json j;
  j["schema"] = schema;
  j["schema_version"] = kSchemaVersion;
  j["library_version"] = library_version();
  j["config"] = config;
  return j;
}

Json to_json(const QSeries& s) { return series_json(s); }
Json to_json(const FSeries& s) { return series_json(s); }

QSeries qseries_from_json(const Json& j) {
  try {
    return series_from<Rational>(j);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

FSeries fseries_from_json(const Json& j) {
  try {
    return series_from<double>(j);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Json hom_to_json(const HomComponent<Rational>& h, int p, int trunc) {
  Json images = Json::object();
  for (int i = 0; i < h.n; ++i) {
    QSeries s(h.n, trunc);
    for (const auto& [code, c] : h.images[i]) s.add_term(h.arity, code, c);
    images[std::to_string(i + 1)] = to_json(s);
  }
  Json j;
  j["p"] = p;
  j["arity"] = h.arity;
  j["images"] = std::move(images);
  return j;
}

Json to_json(const FreeAut& phi) {
  Json j;
  j["n"] = phi.rank();
  j["images"] = endo_json(phi.forward());
  j["inverse_images"] = endo_json(phi.backward());
  return j;
}

FreeAut aut_from_json(const Json& j) {
  try {
    const long long n = integer(field(j, "n"), "n");
    if (n < 1 || n > 64) fail("n out of range");
    FreeEndo forward = endo_from(field(j, "images"), n, "images");
    FreeEndo backward = endo_from(field(j, "inverse_images"), n, "inverse_images");
    return FreeAut(std::move(forward), std::move(backward));
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("complex: empty string");
  const char last = s.back();
  if (last != 'i' && last != 'j') return {parse_real(s, text), 0.0};
  s.pop_back();
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im += "1";
  if (im == "-") im += "1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  fail("complex number must be [re, im], a number or a string");
}

LoopsFile loops_from_json(const Json& j) {
  try {
    LoopsFile f;
    f.tau = complex_from_json(field(j, "tau"));
    f.p0 = complex_from_json(field(j, "p0"));
    f.v = complex_from_json(field(j, "v"));
    const Json& loops = field(j, "loops");
    if (!loops.is_array() || loops.empty()) fail("loops must be a non-empty array");
    for (const Json& l : loops) {
      LoopSpec spec;
      const Json& label = field(l, "label");
      if (!label.is_string()) fail("loop label must be a string");
      spec.label = label.get<std::string>();
      const Json& poly = field(l, "polyline");
      if (!poly.is_array() || poly.size() < 2) fail("loop \"" + spec.label + "\": polyline needs at least two points");
      for (const Json& pt : poly) spec.polyline.push_back(complex_from_json(pt));
      f.loops.push_back(std::move(spec));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Json to_json(const LoopsFile& f) {
  Json loops = Json::array();
  for (const auto& l : f.loops) {
    Json pts = Json::array();
    for (cplx z : l.polyline) pts.push_back(to_json(z));
    loops.push_back({{"label", l.label}, {"polyline", std::move(pts)}});
  }
  Json j;
  j["tau"] = to_json(f.tau);
  j["p0"] = to_json(f.p0);
  j["v"] = to_json(f.v);
  j["loops"] = std::move(loops);
  return j;
}

Json to_json(const AssocCell& c) {
  Json br = Json::array();
  for (const auto& b : c.brackets()) br.push_back(Json::array({b.l, b.r}));
  Json j;
  j["brackets"] = std::move(br);
  j["degree"] = c.degree();
  j["dim"] = c.dim();
  return j;
}

}  // namespace magnus
