import { z } from "zod";

/** Wire types of the workbench JSON API, validated at the trust boundary. */

export const ViewNodeSchema = z.object({
  id: z.number().int(),
  label: z.string(),
  class: z.string(),
  degree: z.number().int(),
});
export type ViewNode = z.infer<typeof ViewNodeSchema>;

export const ViewEdgeSchema = z.object({
  source: z.number().int(),
  target: z.number().int(),
  rtype: z.string(),
});
export type ViewEdge = z.infer<typeof ViewEdgeSchema>;

export const ViewClassSchema = z.object({
  id: z.string(),
  label: z.string(),
  count: z.number().int(),
});
export type ViewClass = z.infer<typeof ViewClassSchema>;

export const ViewGraphSchema = z.object({
  nodes: z.array(ViewNodeSchema),
  edges: z.array(ViewEdgeSchema),
  classes: z.array(ViewClassSchema),
});
export type ViewGraph = z.infer<typeof ViewGraphSchema>;

export const ImportReportSchema = z.object({
  triples_seen: z.number().int(),
  concepts_created: z.number().int(),
  concepts_merged: z.number().int(),
  relations_created: z.number().int(),
  attributes_added: z.number().int(),
  classes_registered: z.number().int(),
  skipped: z.array(z.tuple([z.string(), z.string()])),
});
export type ImportReport = z.infer<typeof ImportReportSchema>;

export const PluginResultSchema = z.object({
  metrics: z.record(z.string(), z.number()),
  notes: z.array(z.string()),
});
export type PluginResult = z.infer<typeof PluginResultSchema>;

export const ConceptDetailSchema = z.object({
  id: z.number().int(),
  iri: z.string().nullable(),
  name: z.string().nullable(),
  class: z.string(),
  degree: z.number().int(),
  accessions: z.array(z.array(z.string())),
  attributes: z.array(z.record(z.string(), z.string().nullable())),
  sources: z.array(z.string()),
});
export type ConceptDetail = z.infer<typeof ConceptDetailSchema>;

export const PluginInfoSchema = z.object({
  name: z.string(),
  kind: z.string(),
  params: z.array(z.record(z.string(), z.unknown())),
});
export type PluginInfo = z.infer<typeof PluginInfoSchema>;

export const GraphCreatedSchema = z.object({ id: z.string() });

/** SPARQL protocol results-JSON (SELECT previews). */
export const SelectResultsSchema = z.object({
  head: z.object({ vars: z.array(z.string()) }),
  results: z.object({
    bindings: z.array(
      z.record(
        z.string(),
        z.object({
          type: z.string(),
          value: z.string(),
          datatype: z.string().optional(),
          "xml:lang": z.string().optional(),
        }),
      ),
    ),
  }),
});
export type SelectResults = z.infer<typeof SelectResultsSchema>;
