#ifndef COBAREXT_BOCKSTEIN_HPP
#define COBAREXT_BOCKSTEIN_HPP
#endif
