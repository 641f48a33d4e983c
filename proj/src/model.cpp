#include "cptree/model.hpp"

#include "cptree/errors.hpp"

#include <string>

namespace cptree {

std::string_view model_name(Model model) {
    switch (model) {
        case Model::uniform_unordered:
            return "uniform-unordered";
        case Model::uniform_labeled:
            return "uniform-labeled";
        case Model::yule_harding:
            return "yule";
        case Model::uniform_ordered:
            return "uniform-ordered";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    for (Model m : all_models) {
        if (model_name(m) == name) {
            return m;
        }
    }
    throw DomainError("unknown model '" + std::string(name) +
                      "' (expected uniform-unordered, uniform-labeled, yule or uniform-ordered)");
}

}  // namespace cptree
