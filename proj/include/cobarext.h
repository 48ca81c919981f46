#ifndef COBAREXT_H
#define COBAREXT_H
#endif
