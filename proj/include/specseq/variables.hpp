#ifndef SPECSEQ_VARIABLES_HPP
#define SPECSEQ_VARIABLES_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specseq/errors.hpp"
#include "specseq/rational.hpp"

namespace specseq {

enum class VarKind { STATE, PARAM };

/* Ordered table of named variables.  STATE variables carry the grading and
   support differentiation; PARAM variables are symbolic constants.  A PARAM
   symbol may be bound as the square root of another PARAM or of a rational,
   in which case even powers of it are rewritten away. */
class VariableTable {
  public:
    struct Var {
        std::string name;
        VarKind kind;
    };

    // radicand is either another PARAM (index) or a rational constant
    struct SqrtBinding {
        int radicand_param = -1;
        BigRational radicand_rational;
        bool is_param() const { return radicand_param >= 0; }
    };

    int add(const std::string& name, VarKind kind) {
        validate_name(name);
        vars_.push_back({name, kind});
        index_[name] = static_cast<int>(vars_.size()) - 1;
        return static_cast<int>(vars_.size()) - 1;
    }
    int add_state(const std::string& name) { return add(name, VarKind::STATE); }
    int add_param(const std::string& name) { return add(name, VarKind::PARAM); }

    void bind_sqrt(const std::string& symbol, const std::string& radicand_param) {
        int s = index_of(symbol), r = index_of(radicand_param);
        if (vars_[s].kind != VarKind::PARAM || vars_[r].kind != VarKind::PARAM)
            throw error("square-root bindings must relate PARAM symbols");
        bindings_[s] = SqrtBinding{r, BigRational()};
    }
    void bind_sqrt(const std::string& symbol, const BigRational& radicand) {
        int s = index_of(symbol);
        if (vars_[s].kind != VarKind::PARAM)
            throw error("square-root bindings must be PARAM symbols");
        bindings_[s] = SqrtBinding{-1, radicand};
    }

    int size() const { return static_cast<int>(vars_.size()); }
    const Var& var(int i) const { return vars_[i]; }
    const std::string& name(int i) const { return vars_[i].name; }
    VarKind kind(int i) const { return vars_[i].kind; }
    bool is_state(int i) const { return vars_[i].kind == VarKind::STATE; }

    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw unknown_variable(name);
        return it->second;
    }
    std::optional<int> try_index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const SqrtBinding* binding(int i) const {
        auto it = bindings_.find(i);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    std::vector<int> state_indices() const {
        std::vector<int> r;
        for (int i = 0; i < size(); ++i)
            if (is_state(i)) r.push_back(i);
        return r;
    }
    int state_count() const { return static_cast<int>(state_indices().size()); }

  private:
    void validate_name(const std::string& name) const {
        if (name.empty()) throw error("empty variable name");
        if (name == "i") throw error("'i' is reserved for the imaginary unit");
        if (!(std::isalpha(static_cast<unsigned char>(name[0]))))
            throw error("variable name must start with a letter: " + name);
        for (char c : name)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw error("invalid character in variable name: " + name);
        if (index_.count(name)) throw error("duplicate variable name: " + name);
    }

    std::vector<Var> vars_;
    std::map<std::string, int> index_;
    std::map<int, SqrtBinding> bindings_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

}  // namespace specseq

#endif
