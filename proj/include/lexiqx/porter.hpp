#pragma once

#include <string>
#include <string_view>

namespace lexiqx {

/// Porter (1980) suffix-stripping stemmer, following Martin Porter's
/// reference implementation (including its "bli"->"ble" and "logi"->"log"
/// departures). Input is expected lowercase; words of length <= 2 are
/// returned unchanged.
std::string porter_stem(std::string_view word);

/// Stems every underscore-separated component and rejoins them, so
/// "insider_trading" becomes "insid_trade". Single words reduce to
/// porter_stem of the lowercased word.
std::string term_stem(std::string_view term);

}  // namespace lexiqx
