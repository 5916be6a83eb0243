#ifndef MLS_RESOURCES_H_
#define MLS_RESOURCES_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "mls/text.h"

// Defaults compiled in from core/data/.
namespace mls::resources {

const StopwordSet& DefaultStopwords();
const std::vector<std::string>& DefaultAbbreviations();

using ValenceLexicon = std::unordered_map<std::string, double>;

// Tab-separated `token<TAB>score` lines, scores in [-4, 4]; '#' starts a
// comment line.
ValenceLexicon ParseValenceLexicon(std::string_view contents);
const ValenceLexicon& DefaultValenceLexicon();

}  // namespace mls::resources

#endif  // MLS_RESOURCES_H_
