#include "feedsep/fixtures.hpp"

#include <map>

#include "feedsep/errors.hpp"
#include "feedsep/model_io.hpp"

namespace feedsep {

namespace {

const std::map<std::string, std::string>& fixture_table() {
    static const std::map<std::string, std::string> table = {
        {"neal-fig1", R"(# Feedback loops X2 <-> X3 and X6 <-> X7. The second loop only has a
# solution when X2 + X4 + X5 = 0, which is what couples X4 and X5.
model neal-fig1
mod 2
disturbance U1 prob 1/2 1/2
disturbance U2 prob 1/2 1/2
disturbance U3 prob 1/2 1/2
disturbance U4 prob 1/2 1/2
disturbance U5 prob 1/2 1/2
disturbance U6 prob 1/2 1/2
disturbance U7 prob 1/2 1/2
var X1 = U1
var X2 = X1 + X3
var X3 = X1 + X2
var X4 = U4
var X5 = U5
var X6 = (X2 + X4 + X5) * (X7 + 1)
var X7 = (X2 + X4 + X5) * X6
)"},
        {"chain3", R"(model chain3
mod 2
disturbance U1 prob 1/2 1/2
disturbance U2 prob 3/4 1/4
disturbance U3 prob 3/4 1/4
var X1 = U1
var X2 = X1 + U2
var X3 = X2 + U3
)"},
        {"collider3", R"(model collider3
mod 2
disturbance U1 prob 1/2 1/2
disturbance U2 prob 1/2 1/2
disturbance U3 prob 3/4 1/4
var X1 = U1
var X2 = U2
var X3 = X1 + X2 + U3
)"},
    };
    return table;
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : fixture_table()) out.push_back(name);
    return out;
}

std::optional<std::string> fixture_text(const std::string& name) {
    const auto& table = fixture_table();
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

Scm fixture(const std::string& name) {
    auto text = fixture_text(name);
    if (!text) {
        std::string names;
        for (const auto& n : fixture_names()) names += (names.empty() ? "" : ", ") + n;
        throw InputError("unknown fixture '" + name + "' (available: " + names + ")");
    }
    return parse_model(*text);
}

}  // namespace feedsep
