#include "magnus/series.hpp"

#include <sstream>

namespace magnus {

std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) s += ' ';
    s += 'X' + std::to_string(w[j]);
  }
  return s;
}

template <class S>
std::string to_string(const Series<S>& a) {
  std::ostringstream os;
  bool first = true;
  a.for_each([&](int m, std::uint64_t code, const S& c) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    if (m > 0) os << "*" << word_to_string(a.decode(m, code));
  });
  if (first) os << "0";
  return os.str();
}

template std::string to_string(const QSeries&);
template std::string to_string(const FSeries&);

}  // namespace magnus
