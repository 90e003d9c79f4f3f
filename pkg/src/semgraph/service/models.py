"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class GraphCreated(BaseModel):
    id: str


class ViewNode(BaseModel):
    id: int
    label: str
    cls: str = Field(alias="class")
    degree: int

    model_config = {"populate_by_name": True}


class ViewEdge(BaseModel):
    source: int
    target: int
    rtype: str


class ViewClass(BaseModel):
    id: str
    label: str
    count: int


class ViewGraph(BaseModel):
    nodes: List[ViewNode]
    edges: List[ViewEdge]
    classes: List[ViewClass]


class SparqlImportRequest(BaseModel):
    endpoint: str
    query: str
    source: str


class PluginResult(BaseModel):
    metrics: Dict[str, float]
    notes: List[str]


class ConceptDetail(BaseModel):
    id: int
    iri: Optional[str]
    name: Optional[str]
    cls: str = Field(alias="class")
    degree: int

    model_config = {"populate_by_name": True}
    accessions: List[List[str]]
    attributes: List[Dict[str, Optional[str]]]
    sources: List[str]


class PluginInfo(BaseModel):
    name: str
    kind: str
    params: List[Dict[str, object]]
