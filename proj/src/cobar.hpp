#ifndef COBAREXT_COBAR_HPP
#define COBAREXT_COBAR_HPP
#endif
