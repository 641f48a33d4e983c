#pragma once

#include <array>
#include <string_view>

namespace cptree {

/// Random-tree models. UniformOrdered (uniform plane trees) and UniformLabeled
/// (uniform cladograms) induce the same law on shapes and are treated
/// identically by every shape-level query.
enum class Model { uniform_unordered, uniform_labeled, yule_harding, uniform_ordered };

inline constexpr std::array<Model, 4> all_models{Model::uniform_unordered, Model::uniform_labeled,
                                                 Model::yule_harding, Model::uniform_ordered};

/// The three models with distinct shape laws.
inline constexpr std::array<Model, 3> distinct_models{Model::uniform_unordered, Model::uniform_labeled,
                                                      Model::yule_harding};

/// "uniform-unordered", "uniform-labeled", "yule", "uniform-ordered".
std::string_view model_name(Model model);

/// Inverse of model_name; throws DomainError for unknown names.
Model parse_model(std::string_view name);

/// Maps UniformOrdered onto UniformLabeled.
constexpr Model shape_law(Model model) {
    return model == Model::uniform_ordered ? Model::uniform_labeled : model;
}

}  // namespace cptree
